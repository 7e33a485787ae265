// config.cpp — INI (de)serialization via Boost.PropertyTree and presets.

#include "wgqed/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace wgqed {

namespace {

namespace pt = boost::property_tree;

std::string format_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T v{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc{} || r.ptr != last)
        throw ValidationError("config key '" + key + "': cannot parse '" + text + "' as a number");
    return v;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::string join_methods(const std::set<Method>& ms) {
    std::string out;
    for (Method m : ms) {
        if (!out.empty()) out += ',';
        out += to_string(m);
    }
    return out;
}

std::set<Method> split_methods(const std::string& text) {
    std::set<Method> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.insert(method_from_string(item));
    }
    return out;
}

// One serializable key: how to print it and how to set it from text.
struct Field {
    std::string key;  // "section.name"
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

template <class T, class Access>
Field number(std::string key, Access access) {
    Field f;
    f.key = key;
    f.get = [access](const RunConfig& c) {
        const auto v = access(c);
        if constexpr (std::is_floating_point_v<T>) return format_double(v);
        else return std::to_string(v);
    };
    f.set = [access, key](RunConfig& c, const std::string& text) { access(c) = parse_number<T>(key, text); };
    return f;
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> t;
        t.push_back({"run.name", [](const RunConfig& c) { return c.name; },
                     [](RunConfig& c, const std::string& v) { c.name = v; }});
        t.push_back({"run.methods", [](const RunConfig& c) { return join_methods(c.methods); },
                     [](RunConfig& c, const std::string& v) { c.methods = split_methods(v); }});
        t.push_back({"run.output_dir", [](const RunConfig& c) { return c.output_dir.string(); },
                     [](RunConfig& c, const std::string& v) { c.output_dir = v; }});
        t.push_back(number<std::uint64_t>("run.seed", [](auto& c) -> auto& { return c.seed; }));
        t.push_back(number<double>("model.omega0", [](auto& c) -> auto& { return c.model.omega0; }));
        t.push_back(number<double>("model.alpha", [](auto& c) -> auto& { return c.model.alpha; }));
        t.push_back(number<double>("model.omega_c", [](auto& c) -> auto& { return c.model.omega_c; }));
        t.push_back(number<double>("model.v_g", [](auto& c) -> auto& { return c.model.v_g; }));
        t.push_back(number<double>("model.x1", [](auto& c) -> auto& { return c.model.x1; }));
        t.push_back(number<double>("model.x2", [](auto& c) -> auto& { return c.model.x2; }));
        t.push_back({"model.initial_state", [](const RunConfig& c) { return to_string(c.model.initial_state); },
                     [](RunConfig& c, const std::string& v) { c.model.initial_state = initial_state_from_string(v); }});
        t.push_back(number<std::size_t>("bath.n_b", [](auto& c) -> auto& { return c.n_b; }));
        t.push_back(number<int>("ansatz.multiplicity", [](auto& c) -> auto& { return c.multiplicity; }));
        t.push_back(number<double>("integrator.dt", [](auto& c) -> auto& { return c.integrator.dt; }));
        t.push_back(number<double>("integrator.t_final", [](auto& c) -> auto& { return c.integrator.t_final; }));
        t.push_back(number<double>("integrator.epsilon_reg", [](auto& c) -> auto& { return c.integrator.epsilon_reg; }));
        t.push_back(number<double>("integrator.noise_scale", [](auto& c) -> auto& { return c.integrator.noise_scale; }));
        t.push_back(number<int>("integrator.output_stride", [](auto& c) -> auto& { return c.integrator.output_stride; }));
        t.push_back(number<double>("integrator.norm_abort", [](auto& c) -> auto& { return c.integrator.norm_abort; }));
        t.push_back(number<double>("integrator.residual_tol", [](auto& c) -> auto& { return c.integrator.residual_tol; }));
        t.push_back(number<double>("integrator.residual_abort", [](auto& c) -> auto& { return c.integrator.residual_abort; }));
        t.push_back(number<double>("integrator.epsilon_max", [](auto& c) -> auto& { return c.integrator.epsilon_max; }));
        t.push_back({"spectrum.grid", [](const RunConfig& c) { return to_string(c.grid); },
                     [](RunConfig& c, const std::string& v) { c.grid = grid_kind_from_string(v); }});
        t.push_back(number<std::size_t>("spectrum.points", [](auto& c) -> auto& { return c.grid_points; }));
        return t;
    }();
    return table;
}

const Field& field(const std::string& key) {
    for (const auto& f : fields())
        if (f.key == key) return f;
    throw ValidationError("unknown config key '" + key + "'");
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::MultiD1: return "multiD1";
        case Method::TRWA: return "TRWA";
        case Method::SP: return "SP";
    }
    return "?";
}

Method method_from_string(std::string_view name) {
    if (name == "multiD1" || name == "multid1" || name == "D1") return Method::MultiD1;
    if (name == "TRWA" || name == "trwa") return Method::TRWA;
    if (name == "SP" || name == "sp") return Method::SP;
    throw ValidationError("unknown method '" + std::string(name) + "'");
}

std::string to_string(GridKind g) {
    switch (g) {
        case GridKind::Auto: return "auto";
        case GridKind::Bath: return "bath";
        case GridKind::Uniform: return "uniform";
    }
    return "?";
}

GridKind grid_kind_from_string(std::string_view name) {
    if (name == "auto") return GridKind::Auto;
    if (name == "bath") return GridKind::Bath;
    if (name == "uniform") return GridKind::Uniform;
    throw ValidationError("unknown spectrum grid '" + std::string(name) + "'");
}

void RunConfig::validate() const {
    if (methods.empty()) throw ValidationError("at least one method must be selected");
    if (name.empty()) throw ValidationError("run name must not be empty");
    model.validate();
    if (model.alpha > 1.0) throw ValidationError("alpha must lie in [0, 1]");
    if (multiplicity < 1 || multiplicity > 16) throw ValidationError("multiplicity must lie in [1, 16]");
    if (n_b < 8 || n_b > 5000) throw ValidationError("n_b must lie in [8, 5000]");
    if (grid_points < 2) throw ValidationError("spectrum.points must be >= 2");
    integrator.validate();
}

bool RunConfig::operator==(const RunConfig& o) const {
    for (const auto& f : fields())
        if (f.get(*this) != f.get(o)) return false;
    return true;
}

RunConfig parse_config(std::istream& is) {
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(std::string("config syntax: ") + e.what());
    }
    RunConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ValidationError("config key '" + section + "' outside a section");
        for (const auto& [key, value] : body) field(section + "." + key).set(c, trim(value.data()));
    }
    c.integrator.noise_seed = c.seed;
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    return parse_config(in);
}

void write_config(std::ostream& os, const RunConfig& c) {
    std::string section;
    for (const auto& f : fields()) {
        const auto dot = f.key.find('.');
        const std::string s = f.key.substr(0, dot);
        if (s != section) {
            if (!section.empty()) os << '\n';
            os << '[' << s << "]\n";
            section = s;
        }
        os << f.key.substr(dot + 1) << " = " << f.get(c) << '\n';
    }
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    write_config(os, c);
    return os.str();
}

void apply_override(RunConfig& c, const std::string& key, const std::string& value) {
    field(trim(key)).set(c, trim(value));
    c.integrator.noise_seed = c.seed;
}

void apply_override(RunConfig& c, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ValidationError("override must look like section.key=value");
    apply_override(c, std::string(assignment.substr(0, eq)), std::string(assignment.substr(eq + 1)));
}

namespace {

RunConfig base(std::string name, double alpha, double d, InitialState s, std::set<Method> methods) {
    RunConfig c;
    c.name = std::move(name);
    c.model = ModelParams::with_distance(alpha, d, s);
    c.methods = std::move(methods);
    c.n_b = 300;
    c.multiplicity = 4;
    c.integrator.t_final = 300.0;
    return c;
}

RunConfig desk(RunConfig c) {
    c.name += "-desk";
    c.n_b = 150;
    c.multiplicity = std::min(c.multiplicity, 3);
    c.integrator.t_final = 150.0;
    return c;
}

} // namespace

std::vector<Preset> presets() {
    std::vector<Preset> out;
    const double ds[] = {1.0, 3.0, 12.0};
    const InitialState states[] = {InitialState::Psi0, InitialState::PsiPlus, InitialState::PsiMinus};
    for (int fig = 1; fig <= 2; ++fig) {
        const double alpha = fig == 1 ? 0.05 : 0.1;
        const std::set<Method> methods = fig == 1 ? std::set{Method::MultiD1, Method::TRWA, Method::SP}
                                                  : std::set{Method::MultiD1, Method::TRWA};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const char cell = static_cast<char>('a' + 3 * i + j);
                const std::string name = "fig" + std::to_string(fig) + cell;
                std::ostringstream desc;
                desc << "spectrum, alpha=" << alpha << ", d=" << ds[i] << " L0, " << to_string(states[j]);
                out.push_back({name, desc.str(), base(name, alpha, ds[i], states[j], methods)});
            }
    }
    out.push_back({"fig3", "populations and photon numbers, alpha=0.1, d=12 L0, PsiPlus",
                   base("fig3", 0.1, 12.0, InitialState::PsiPlus, {Method::MultiD1})});
    {
        RunConfig weak = base("weak", 0.001, 1.0, InitialState::Psi0, {Method::TRWA, Method::SP});
        weak.grid = GridKind::Uniform;
        weak.grid_points = 20001;
        out.push_back({"weak", "TRWA vs SP at alpha=0.001, d=L0, Psi0", weak});
    }
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i)
        if (out[i].config.has(Method::MultiD1))
            out.push_back({out[i].name + "-desk", out[i].description + " (desk scale)", desk(out[i].config)});
    return out;
}

RunConfig preset(std::string_view name) {
    for (auto& p : presets())
        if (p.name == name) return p.config;
    throw ValidationError("unknown preset '" + std::string(name) + "'");
}

} // namespace wgqed
