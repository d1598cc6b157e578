#include <cstddef>
#include <cstdint>

#include "sitest/nulldist.hpp"

namespace sitest {

namespace detail {
// Defined in the build-time generated translation unit.
extern const double kNullTableData[];
extern const std::size_t kNullTableSize;
extern const std::uint64_t kNullTableSeed;
extern const std::uint64_t kNullTableStream;
extern const int kNullTableTerms;
}  // namespace detail

const NullTable& embedded_null_table() {
  static const NullTable table = [] {
    NullTable t;
    t.method = "series";
    t.seed = detail::kNullTableSeed;
    t.stream = detail::kNullTableStream;
    t.resolution = detail::kNullTableTerms;
    t.samples.assign(detail::kNullTableData,
                     detail::kNullTableData + detail::kNullTableSize);
    return t;
  }();
  return table;
}

}  // namespace sitest
