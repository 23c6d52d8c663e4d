#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ncs {

enum class Field { real, complex };
enum class Level { classical, half, free };

// One of the ten spheres, or equivalently one of the ten quantum groups.
// Free objects cannot be twisted; the constructor drops the flag.
struct Spec {
    Field field = Field::real;
    Level level = Level::classical;
    bool twisted = false;

    Spec() = default;
    Spec(Field f, Level l, bool t = false) : field(f), level(l), twisted(t && l != Level::free) {}

    bool operator==(const Spec&) const = default;
};

using GroupSpec = Spec;
using SphereSpec = Spec;

// o_n, o_n_star, o_n_plus, bar_o_n, bar_o_n_star, u_n, u_n_star2, ...
std::string group_name(const Spec& s);
// real_classical, real_classical_twisted, real_half, ..., complex_free
std::string sphere_name(const Spec& s);
// Accepts group names, sphere names, and the bare regime words "real" etc.
Spec parse_spec(std::string_view name);
std::vector<Spec> all_specs();

struct Regime {
    Field field = Field::real;
    bool twisted = false;
};
Regime parse_regime(std::string_view name);
std::string regime_name(const Regime& r);

}  // namespace ncs
