#pragma once

#include "mas/types.hpp"

namespace mas {

struct PreQuotientLimits {
  // Candidate ready sets are subsets of the intersection of the two
  // acceptance unions; this caps that intersection's size.
  std::size_t max_union_size = 16;
};

/// Pre-quotient of two specifications. States are the reachable pairs; the
/// acceptance set of a pair collects every candidate ready set whose
/// intersection with each right-hand entry lands in the left-hand
/// acceptance set; a pair is marked when the left state is marked or the
/// right one is not. The raw construction is normalized before returning.
/// Bottom inputs yield a bottom output.
Mas pre_quotient(const Mas& s1, const Mas& s2,
                 const PreQuotientLimits& limits = {});

}  // namespace mas
