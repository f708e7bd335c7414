#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fpcert/metric_space.hpp"
#include "fpcert/modulus.hpp"

namespace fpcert {

// A self-map together with the space it acts on. apply may throw or leave
// the domain; iteration and checks treat both as map errors at that point.
struct MapUnderTest {
  MetricSpaceHandle space;
  std::function<Point(const Point&)> apply;
  std::string name;

  MapUnderTest(MetricSpaceHandle s, std::function<Point(const Point&)> f,
               std::string n)
      : space(std::move(s)), apply(std::move(f)), name(std::move(n)) {
    if (!apply) throw std::invalid_argument("map '" + name + "': empty apply");
  }

  Point operator()(const Point& x) const { return apply(x); }
};

// d(Tx, Ty) <= lambda d(x, y) with lambda in [0, 1).
struct BanachCertificate {
  double lambda = 0.5;
};

// d(Tx, Ty) < d(x, y) for all x != y. No rate claim.
struct ContractiveCert {};

// For every eps > 0 there is delta > 0 with
// eps <= d(x, y) < eps + delta  =>  d(Tx, Ty) < eps.
struct MeirKeelerCertificate {
  ModulusFunction delta;  // eps -> delta(eps), must be positive where probed
};

// Contractive plus the non-strict band condition
// eps < d(x, y) < eps + delta  =>  d(Tx, Ty) <= eps.
struct CjmpCertificate {
  ModulusFunction delta;
};

enum class ConditionSet { i_ii_iii, iii_prime, iii_doubleprime };

inline const char* to_string(ConditionSet s) {
  switch (s) {
    case ConditionSet::i_ii_iii: return "i_ii_iii";
    case ConditionSet::iii_prime: return "iii_prime";
    case ConditionSet::iii_doubleprime: return "iii_doubleprime";
  }
  return "unknown";
}

inline ConditionSet condition_set_from_string(const std::string& s) {
  if (s == "i_ii_iii") return ConditionSet::i_ii_iii;
  if (s == "iii_prime") return ConditionSet::iii_prime;
  if (s == "iii_doubleprime") return ConditionSet::iii_doubleprime;
  throw std::invalid_argument("unknown condition set '" + s + "'");
}

// phi(d(x, y)) + F(d(Tx, Ty)) <= F(d(x, y)) whenever Tx != Ty, with the
// side conditions selected by `conditions` imposed on phi (and F).
struct WardowskiCertificate {
  ModulusFunction phi;
  ModulusFunction f;  // F in the inequality
  ConditionSet conditions = ConditionSet::i_ii_iii;
};

// d(Tx, Ty) <= phi(d(x, y)) with phi(t) < t and right limsup of phi below
// the identity at every t > 0.
struct RiCertificate {
  ModulusFunction phi;
  bool improved = false;  // relaxes the limsup bound to a liminf bound
};

// F(d(Tx, Ty)) <= E(d(x, y)) for a compatible pair (E, F). relaxed drops
// the order gap (C1) and requires the map itself to be contractive.
struct CompatiblePairCertificate {
  ModulusFunction e;
  ModulusFunction f;
  bool relaxed = false;
};

// alpha F(t) < F(s) for 0 < t <= s, F positive right limits, and
// F(d(Tx, Ty)) <= alpha F(d(x, y)).
struct AlphaFCertificate {
  double alpha = 0.5;  // in [0, 1)
  ModulusFunction f;
};

// F nondecreasing, E(t) < F(t), and liminf_n E(t_n) < F(eps+) for t_n
// decreasing to eps; together with F(d(Tx, Ty)) <= E(d(x, y)).
struct ProinovCertificate {
  ModulusFunction e;
  ModulusFunction f;
};

using Certificate =
    std::variant<BanachCertificate, ContractiveCert, MeirKeelerCertificate,
                 CjmpCertificate, WardowskiCertificate, RiCertificate,
                 CompatiblePairCertificate, AlphaFCertificate,
                 ProinovCertificate>;

inline const char* certificate_kind(const Certificate& c) {
  struct Visitor {
    const char* operator()(const BanachCertificate&) const { return "banach"; }
    const char* operator()(const ContractiveCert&) const {
      return "contractive";
    }
    const char* operator()(const MeirKeelerCertificate&) const {
      return "meir_keeler";
    }
    const char* operator()(const CjmpCertificate&) const { return "cjmp"; }
    const char* operator()(const WardowskiCertificate&) const {
      return "wardowski";
    }
    const char* operator()(const RiCertificate&) const { return "ri"; }
    const char* operator()(const CompatiblePairCertificate&) const {
      return "compatible_pair_ef";
    }
    const char* operator()(const AlphaFCertificate&) const {
      return "alpha_f";
    }
    const char* operator()(const ProinovCertificate&) const {
      return "proinov";
    }
  };
  return std::visit(Visitor{}, c);
}

inline std::vector<std::string> certificate_kind_names() {
  return {"banach",    "contractive", "meir_keeler",
          "cjmp",      "wardowski",   "ri",
          "compatible_pair_ef", "alpha_f", "proinov"};
}

// Structural validation of certificate parameters (not the map conditions).
inline void validate(const Certificate& c) {
  struct Visitor {
    void operator()(const BanachCertificate& b) const {
      if (!(b.lambda >= 0.0) || !(b.lambda < 1.0)) {
        throw std::invalid_argument(
            "banach certificate: lambda must lie in [0, 1)");
      }
    }
    void operator()(const ContractiveCert&) const {}
    void operator()(const MeirKeelerCertificate&) const {}
    void operator()(const CjmpCertificate&) const {}
    void operator()(const WardowskiCertificate&) const {}
    void operator()(const RiCertificate&) const {}
    void operator()(const CompatiblePairCertificate&) const {}
    void operator()(const AlphaFCertificate& a) const {
      if (!(a.alpha >= 0.0) || !(a.alpha < 1.0)) {
        throw std::invalid_argument(
            "alpha_f certificate: alpha must lie in [0, 1)");
      }
    }
    void operator()(const ProinovCertificate&) const {}
  };
  std::visit(Visitor{}, c);
}

}  // namespace fpcert
