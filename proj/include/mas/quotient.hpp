#pragma once

#include "mas/compat.hpp"
#include "mas/types.hpp"

namespace mas {

/// Deadlock correction: for every reachable pair that is not
/// deadlock-free, shrink the left acceptance set so that every surviving
/// ready set meets every right-hand entry (or collapse it to {∅} / ∅ when
/// the right state only allows quiescence), then normalize. May return the
/// bottom specification.
Mas dead_correction(const Mas& s1, const Mas& s2);

/// One livelock repair step for a cycle and its partner cycle. Adds
/// priorities forcing a mandatory exit of the partner cycle when one is
/// realizable, otherwise filters acceptance sets (covering the partner's
/// optional exits, or cutting every entry re-entering the cycle) and
/// normalizes. Priority pairs to deleted states are dropped; empty
/// priority sets are removed.
Masp live_corr_cycle(const Masp& s1p, const Cycle& c1, const Mas& s2,
                     const Cycle& c2, const PartnerMap& pm);

/// Folds live_corr_cycle over every implementable cycle of s1 (in
/// canonical cycle order) whose states are all single-partnered and which
/// fails the livelock test against s2. Requires single partners.
Masp live_correction(const Mas& s1, const Mas& s2,
                     const CycleLimits& limits = {});

/// Compatible-reachability correction: deadlock correction, unfoldings of
/// the result against s2, livelock correction on the unfolded pair. The
/// output lives on the unfolded state space.
Masp rho_t(const Mas& s1, const Mas& s2, const CycleLimits& limits = {});

/// Quotient: rho_t applied to the pre-quotient.
Masp quotient(const Mas& s1, const Mas& s2, const CycleLimits& limits = {});

}  // namespace mas
