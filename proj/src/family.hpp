#pragma once

#include <array>
#include <string>

namespace rvc {

// Enumeration order is authoritative: selection ties resolve to the earliest
// family in this list.
enum class Family { independence = 0, gaussian, clayton, gumbel, frank };

inline constexpr std::array<Family, 5> kAllFamilies = {
    Family::independence, Family::gaussian, Family::clayton, Family::gumbel, Family::frank};

const char* family_name(Family f);
Family family_from_name(const std::string& name);

int family_param_count(Family f);

// Admissible parameter interval. Independence has no parameter; callers must
// not query it.
double family_param_lo(Family f);
double family_param_hi(Family f);

// Kendall tau range reachable inside the parameter bounds.
double family_tau_lo(Family f);
double family_tau_hi(Family f);

// True for families that only model positive dependence.
bool family_positive_only(Family f);

} // namespace rvc
