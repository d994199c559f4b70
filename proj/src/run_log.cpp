#include "translab/run_log.hpp"

#include "translab/error.hpp"

#include <fstream>

namespace translab {

void RunLog::append(nlohmann::json record)
{
  std::lock_guard lock(mutex_);
  records_.push_back(std::move(record));
}

void RunLog::flush() const
{
  if (path_.empty())
    return;
  std::lock_guard lock(mutex_);
  std::ofstream os(path_, std::ios::app);
  if (!os)
    throw ValidationError("cannot open run log " + path_);
  for (const auto& r : records_)
    os << r.dump() << '\n';
}

} // namespace translab
