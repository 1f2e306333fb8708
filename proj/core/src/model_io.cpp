#include "ri1d/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "ri1d/errors.hpp"
#include "ri1d/sign_field.hpp"

namespace ri1d {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_number(const std::string& s, int line, const std::string& key) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (trim(s.substr(used)).empty() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': cannot parse number '" + s + "'", line);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

const std::vector<std::string> kDriverKeys{"type", "base", "jumps", "level", "samples", "T"};

} // namespace

std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

KeyValues KeyValues::parse(std::istream& in) {
    KeyValues kv;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + s + "'", line);
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ConfigError("empty key", line);
        if (kv.entries_.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
        kv.entries_[key] = {trim(s.substr(eq + 1)), line};
    }
    return kv;
}

KeyValues KeyValues::parse_inline(const std::string& text) {
    std::istringstream is(text);
    std::string tok, lines;
    bool first = true;
    while (is >> tok) {
        if (first && tok.find('=') == std::string::npos) tok = "type=" + tok;
        first = false;
        lines += tok + "\n";
    }
    std::istringstream body(lines);
    return parse(body);
}

const std::string& KeyValues::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing key '" + key + "'");
    return it->second.first;
}

int KeyValues::line(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.second;
}

double KeyValues::number(const std::string& key) const { return to_number(get(key), line(key), key); }

double KeyValues::number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

int KeyValues::integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v)) throw ConfigError("key '" + key + "' must be an integer", line(key));
    return int(v);
}

std::vector<double> KeyValues::numbers(const std::string& key) const {
    std::vector<double> out;
    const std::string& s = get(key);
    if (trim(s).empty()) return out;
    for (const auto& part : split(s, ',')) out.push_back(to_number(part, line(key), key));
    return out;
}

std::vector<std::pair<double, double>> KeyValues::pairs(const std::string& key) const {
    std::vector<std::pair<double, double>> out;
    const std::string& s = get(key);
    if (trim(s).empty()) return out;
    for (const auto& part : split(s, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) throw ConfigError("key '" + key + "': expected a:b, got '" + part + "'", line(key));
        out.emplace_back(to_number(part.substr(0, colon), line(key), key),
                         to_number(part.substr(colon + 1), line(key), key));
    }
    return out;
}

void KeyValues::require_only(const std::vector<std::string>& allowed) const {
    for (const auto& [k, v] : entries_)
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError("unknown key '" + k + "'", v.second);
}

MonotoneDriver parse_driver(const KeyValues& kv) {
    const std::string type = kv.get("type");
    try {
        if (type == "cantor") return MonotoneDriver::cantor(kv.integer("level"));
        if (type == "staircase")
            return MonotoneDriver::staircase(kv.number("base", 0.0), kv.has("jumps") ? kv.pairs("jumps")
                                                                                    : std::vector<std::pair<double, double>>{},
                                             kv.number("T", 1.0));
        if (type == "table") return MonotoneDriver::table(kv.pairs("samples"));
    } catch (const ConfigError& e) {
        if (e.line() > 0) throw;
        throw ConfigError(e.what(), kv.line("type"));
    }
    throw ConfigError("unknown driver type '" + type + "'", kv.line("type"));
}

MonotoneDriver load_driver(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open driver file '" + path + "'");
    KeyValues kv = KeyValues::parse(in);
    kv.require_only(kDriverKeys);
    return parse_driver(kv);
}

EnergyModel parse_model(const KeyValues& kv) {
    const std::string family = kv.get("family");
    EnergyModel m = zero_model();
    if (family == "separable") {
        kv.require_only({"family", "W.coeffs", "loading.coeffs", "domain.T", "domain.L", "offset"});
        m = EnergyModel::separable(kv.has("W.coeffs") ? kv.numbers("W.coeffs") : std::vector<double>{},
                                   kv.has("loading.coeffs") ? kv.numbers("loading.coeffs") : std::vector<double>{},
                                   kv.number("domain.T"), kv.number("domain.L"));
    } else if (family == "polynomial") {
        kv.require_only({"family", "terms", "domain.T", "domain.L", "offset"});
        std::vector<GeneralPolynomial::Term> terms;
        const std::string& s = kv.get("terms");
        std::istringstream is(s);
        std::string part;
        while (std::getline(is, part, ',')) {
            part = trim(part);
            if (part.empty()) continue;
            auto f = split(part, ':');
            if (f.size() != 3) throw ConfigError("terms: expected i:j:c, got '" + part + "'", kv.line("terms"));
            const double i = to_number(f[0], kv.line("terms"), "terms");
            const double j = to_number(f[1], kv.line("terms"), "terms");
            if (i != std::floor(i) || j != std::floor(j) || i < 0 || j < 0)
                throw ConfigError("terms: exponents must be non-negative integers", kv.line("terms"));
            terms.push_back({int(i), int(j), to_number(f[2], kv.line("terms"), "terms")});
        }
        m = EnergyModel::polynomial(std::move(terms), kv.number("domain.T"), kv.number("domain.L"));
    } else if (family == "constructed") {
        std::vector<std::string> allowed = kDriverKeys;
        for (const char* k : {"family", "M", "sharpness", "x0", "domain.T", "domain.L", "offset"}) allowed.push_back(k);
        kv.require_only(allowed);
        MonotoneDriver u = parse_driver(kv);
        const double M = kv.number("M", default_bound(u));
        const double w = kv.number("sharpness", default_sharpness(u));
        auto g = std::make_shared<const SignField>(u, M, w);
        auto e = std::make_shared<const ConstructedEnergy>(g, kv.number("x0", u(0.0)));
        m = EnergyModel::constructed(e, kv.number("domain.T", u.horizon()), kv.number("domain.L", M));
    } else {
        throw ConfigError("unknown family '" + family + "'", kv.line("family"));
    }
    return m.with_offset(kv.number("offset", 0.0));
}

EnergyModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model file '" + path + "'");
    return parse_model(KeyValues::parse(in));
}

std::string serialize_model(const EnergyModel& model) {
    std::ostringstream os;
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_number(v[k]);
        return s;
    };
    os << "family=" << model.family() << "\n";
    if (auto* s = std::get_if<SeparablePolynomial>(&model.repr())) {
        os << "W.coeffs=" << list(s->W) << "\n";
        os << "loading.coeffs=" << list(s->loading) << "\n";
    } else if (auto* p = std::get_if<GeneralPolynomial>(&model.repr())) {
        os << "terms=";
        for (std::size_t k = 0; k < p->terms.size(); ++k)
            os << (k ? "," : "") << p->terms[k].i << ":" << p->terms[k].j << ":" << format_number(p->terms[k].c);
        os << "\n";
    } else {
        const auto& e = *std::get<Constructed>(model.repr()).energy;
        os << e.field().driver().describe();
        os << "M=" << format_number(e.field().bound()) << "\n";
        os << "sharpness=" << format_number(e.field().sharpness()) << "\n";
        os << "x0=" << format_number(e.anchor()) << "\n";
    }
    os << "domain.T=" << format_number(model.domain().t.hi) << "\n";
    os << "domain.L=" << format_number(model.domain().x.hi) << "\n";
    os << "offset=" << format_number(model.offset()) << "\n";
    return os.str();
}

} // namespace ri1d
