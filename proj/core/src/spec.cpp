#include "ncsphere/spec.hpp"

#include "ncsphere/error.hpp"

namespace ncs {

std::string group_name(const Spec& s) {
    std::string base = s.field == Field::real ? "o_n" : "u_n";
    std::string suffix;
    if (s.level == Level::half) suffix = s.field == Field::real ? "_star" : "_star2";
    if (s.level == Level::free) suffix = "_plus";
    return (s.twisted ? "bar_" : "") + base + suffix;
}

std::string sphere_name(const Spec& s) {
    std::string out = s.field == Field::real ? "real_" : "complex_";
    out += s.level == Level::classical ? "classical" : s.level == Level::half ? "half" : "free";
    if (s.twisted) out += "_twisted";
    return out;
}

std::vector<Spec> all_specs() {
    std::vector<Spec> out;
    for (Field f : {Field::real, Field::complex})
        for (Level l : {Level::classical, Level::half, Level::free})
            for (bool t : {false, true})
                if (!(t && l == Level::free)) out.emplace_back(f, l, t);
    return out;
}

Spec parse_spec(std::string_view name) {
    for (const Spec& s : all_specs())
        if (name == group_name(s) || name == sphere_name(s)) return s;
    if (name == "real") return Spec(Field::real, Level::classical);
    if (name == "complex") return Spec(Field::complex, Level::classical);
    if (name == "real_twisted") return Spec(Field::real, Level::classical, true);
    if (name == "complex_twisted") return Spec(Field::complex, Level::classical, true);
    if (name == "real_free_twisted") return Spec(Field::real, Level::free);
    if (name == "complex_free_twisted") return Spec(Field::complex, Level::free);
    throw ParseError("unknown sphere or group: " + std::string(name));
}

Regime parse_regime(std::string_view name) {
    if (name == "real") return {Field::real, false};
    if (name == "complex") return {Field::complex, false};
    if (name == "real_twisted") return {Field::real, true};
    if (name == "complex_twisted") return {Field::complex, true};
    throw ParseError("unknown regime: " + std::string(name));
}

std::string regime_name(const Regime& r) {
    return std::string(r.field == Field::real ? "real" : "complex") + (r.twisted ? "_twisted" : "");
}

}  // namespace ncs
