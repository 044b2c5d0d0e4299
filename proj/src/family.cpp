#include "family.hpp"

#include "errors.hpp"
#include "pair_copula.hpp"

namespace rvc {

const char* family_name(Family f) {
    switch (f) {
        case Family::independence: return "independence";
        case Family::gaussian: return "gaussian";
        case Family::clayton: return "clayton";
        case Family::gumbel: return "gumbel";
        case Family::frank: return "frank";
    }
    fail(ErrorKind::invalid_argument, "unknown family");
}

Family family_from_name(const std::string& name) {
    for (Family f : kAllFamilies)
        if (name == family_name(f)) return f;
    fail(ErrorKind::parse, "unknown copula family '" + name + "'");
}

int family_param_count(Family f) { return f == Family::independence ? 0 : 1; }

double family_param_lo(Family f) {
    switch (f) {
        case Family::gaussian: return -0.999;
        case Family::clayton: return 1e-4;
        case Family::gumbel: return 1.0;
        case Family::frank: return -35.0;
        default: fail(ErrorKind::invalid_argument, "family has no parameter");
    }
}

double family_param_hi(Family f) {
    switch (f) {
        case Family::gaussian: return 0.999;
        case Family::clayton: return 28.0;
        case Family::gumbel: return 17.0;
        case Family::frank: return 35.0;
        default: fail(ErrorKind::invalid_argument, "family has no parameter");
    }
}

double family_tau_lo(Family f) {
    switch (f) {
        case Family::independence: return 0.0;
        case Family::gaussian: return param_to_tau(Family::gaussian, -0.999);
        case Family::clayton: return param_to_tau(Family::clayton, 1e-4);
        case Family::gumbel: return 0.0;
        case Family::frank: {
            static const double lo = param_to_tau(Family::frank, -35.0);
            return lo;
        }
    }
    fail(ErrorKind::invalid_argument, "unknown family");
}

double family_tau_hi(Family f) {
    switch (f) {
        case Family::independence: return 0.0;
        case Family::gaussian: return param_to_tau(Family::gaussian, 0.999);
        case Family::clayton: return param_to_tau(Family::clayton, 28.0);
        case Family::gumbel: return param_to_tau(Family::gumbel, 17.0);
        case Family::frank: {
            static const double hi = param_to_tau(Family::frank, 35.0);
            return hi;
        }
    }
    fail(ErrorKind::invalid_argument, "unknown family");
}

bool family_positive_only(Family f) {
    return f == Family::clayton || f == Family::gumbel;
}

} // namespace rvc
