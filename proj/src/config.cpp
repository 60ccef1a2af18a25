#include "cdois/config.hpp"

#include "cdois/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace cdois::config {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

// Walks a syntactically valid JSON text and reports the line on which the
// value at `target` starts.
class LineScanner {
public:
    LineScanner(const std::string& text, std::vector<std::string> target)
        : s_(text), target_(std::move(target)) {}

    int run() {
        std::vector<std::string> path;
        return value(path) ? found_ : 0;
    }

private:
    bool at_end() const { return i_ >= s_.size(); }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            if (s_[i_] == '\n') ++line_;
            ++i_;
        }
    }

    std::string string_token() {
        std::string out;
        ++i_;  // opening quote
        while (!at_end() && s_[i_] != '"') {
            if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
                out += s_[i_ + 1];
                i_ += 2;
                continue;
            }
            out += s_[i_++];
        }
        ++i_;  // closing quote
        return out;
    }

    bool value(std::vector<std::string>& path) {
        skip_ws();
        if (at_end()) return false;
        if (path == target_) {
            found_ = line_;
            return true;
        }
        const char c = s_[i_];
        if (c == '{' || c == '[') {
            const bool object = c == '{';
            const char close = object ? '}' : ']';
            ++i_;
            skip_ws();
            if (!at_end() && s_[i_] == close) {
                ++i_;
                return false;
            }
            for (std::size_t index = 0;; ++index) {
                skip_ws();
                std::string key = std::to_string(index);
                if (object) {
                    key = string_token();
                    skip_ws();
                    ++i_;  // colon
                }
                path.push_back(key);
                if (value(path)) return true;
                path.pop_back();
                skip_ws();
                if (at_end()) return false;
                if (s_[i_++] != ',') return false;
            }
        }
        if (c == '"') {
            string_token();
            return false;
        }
        while (!at_end() && std::strchr(",]} \t\r\n", s_[i_]) == nullptr) ++i_;
        return false;
    }

    const std::string& s_;
    std::vector<std::string> target_;
    std::size_t i_ = 0;
    int line_ = 1;
    int found_ = 0;
};

std::vector<std::string> split_pointer(const std::string& pointer) {
    std::vector<std::string> parts;
    if (pointer.empty()) return parts;
    std::size_t pos = 1;
    for (;;) {
        const std::size_t next = pointer.find('/', pos);
        std::string tok = pointer.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        for (std::size_t k = 0; (k = tok.find('~', k)) != std::string::npos; ++k) {
            tok.replace(k, 2, tok.compare(k, 2, "~1") == 0 ? "/" : "~");
        }
        parts.push_back(tok);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return parts;
}

std::string join(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
        throw ConfigError(msg + " (at " + (ptr.empty() ? "/" : ptr) + ")", line_of(text_, ptr));
    }

    void require_object(const json& j, const std::string& ptr) const {
        if (!j.is_object()) fail(ptr, "expected an object");
    }

    void allowed_keys(const json& j, const std::string& ptr,
                      std::initializer_list<const char*> keys) const {
        require_object(j, ptr);
        for (const auto& item : j.items()) {
            const bool known = std::any_of(keys.begin(), keys.end(),
                                           [&](const char* k) { return item.key() == k; });
            if (!known) fail(join(ptr, item.key()), "unknown key '" + item.key() + "'");
        }
    }

    double number(const json& j, const std::string& ptr) const {
        if (!j.is_number()) fail(ptr, "expected a number");
        return j.get<double>();
    }

    double positive(const json& j, const std::string& ptr) const {
        const double v = number(j, ptr);
        if (!(v > 0.0) || !std::isfinite(v)) fail(ptr, "must be positive and finite");
        return v;
    }

    std::int64_t integer(const json& j, const std::string& ptr, std::int64_t min) const {
        if (!j.is_number_integer()) fail(ptr, "expected an integer");
        const auto v = j.get<std::int64_t>();
        if (v < min) fail(ptr, "must be at least " + std::to_string(min));
        return v;
    }

    std::uint64_t unsigned_integer(const json& j, const std::string& ptr) const {
        if (!j.is_number_unsigned()) fail(ptr, "expected a non-negative integer");
        return j.get<std::uint64_t>();
    }

    std::string string(const json& j, const std::string& ptr) const {
        if (!j.is_string()) fail(ptr, "expected a string");
        return j.get<std::string>();
    }

    std::vector<double> positive_list(const json& j, const std::string& ptr) const {
        if (!j.is_array()) fail(ptr, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t k = 0; k < j.size(); ++k) out.push_back(positive(j[k], join(ptr, std::to_string(k))));
        return out;
    }

private:
    const std::string& text_;
};

ModelParams read_params(const Reader& rd, const json& j, const std::string& ptr) {
    rd.allowed_keys(j, ptr, {"rho", "lambda", "mu"});
    if (!j.contains("rho")) rd.fail(ptr, "missing 'rho'");
    const double rho = rd.positive(j["rho"], join(ptr, "rho"));
    const bool has_l = j.contains("lambda");
    const bool has_m = j.contains("mu");
    if (has_l == has_m) rd.fail(ptr, "give exactly one of 'lambda' and 'mu'");
    if (has_l) return ModelParams(rho, rd.positive(j["lambda"], join(ptr, "lambda")));
    return ModelParams::from_mean_jump(rho, rd.positive(j["mu"], join(ptr, "mu")));
}

Contract read_contract(const Reader& rd, const json& j, const std::string& ptr) {
    rd.allowed_keys(j, ptr, {"maturity", "rate", "periods_per_year"});
    double maturity = 5.0;
    double rate = 0.0;
    int ppy = 4;
    if (j.contains("maturity")) maturity = rd.positive(j["maturity"], join(ptr, "maturity"));
    if (j.contains("rate")) {
        rate = rd.number(j["rate"], join(ptr, "rate"));
        if (!(rate >= 0.0) || !std::isfinite(rate)) rd.fail(join(ptr, "rate"), "must be non-negative");
    }
    if (j.contains("periods_per_year")) {
        ppy = static_cast<int>(rd.integer(j["periods_per_year"], join(ptr, "periods_per_year"), 1));
    }
    return Contract(maturity, rate, ppy);
}

std::vector<Tranche> read_tranches(const Reader& rd, const json& j, const std::string& ptr) {
    if (j.is_string()) {
        if (j.get<std::string>() != "standard") rd.fail(ptr, "unknown tranche preset (expected \"standard\")");
        return standard_tranches();
    }
    if (!j.is_array()) rd.fail(ptr, "expected \"standard\" or an array of tranches");
    std::vector<Tranche> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string p = join(ptr, std::to_string(k));
        const json& t = j[k];
        double a = 0.0;
        double d = 0.0;
        if (t.is_array()) {
            if (t.size() != 2) rd.fail(p, "a tranche is an [attachment, detachment] pair");
            a = rd.number(t[0], join(p, "0"));
            d = rd.number(t[1], join(p, "1"));
        } else if (t.is_object()) {
            rd.allowed_keys(t, p, {"a", "d"});
            if (!t.contains("a") || !t.contains("d")) rd.fail(p, "a tranche needs 'a' and 'd'");
            a = rd.number(t["a"], join(p, "a"));
            d = rd.number(t["d"], join(p, "d"));
        } else {
            rd.fail(p, "a tranche is an [a, d] pair or an {\"a\", \"d\"} object");
        }
        try {
            out.emplace_back(a, d);
        } catch (const DomainError& e) {
            rd.fail(p, e.what());
        }
    }
    return out;
}

McSection read_mc(const Reader& rd, const json& j, const std::string& ptr) {
    rd.allowed_keys(j, ptr, {"paths", "seed", "chunk_size", "threads"});
    McSection m;
    if (j.contains("paths")) m.paths = rd.integer(j["paths"], join(ptr, "paths"), 1);
    if (j.contains("seed")) m.seed = rd.unsigned_integer(j["seed"], join(ptr, "seed"));
    if (j.contains("chunk_size")) m.chunk_size = rd.integer(j["chunk_size"], join(ptr, "chunk_size"), 1);
    if (j.contains("threads")) m.threads = static_cast<int>(rd.integer(j["threads"], join(ptr, "threads"), 0));
    return m;
}

SweepSection read_sweep(const Reader& rd, const json& j, const std::string& ptr) {
    rd.allowed_keys(j, ptr,
                    {"axis", "values", "rho_ratios", "lambda_ratios", "timing_rhos", "timing_paths",
                     "timing_repeats", "timing_c", "timing_b"});
    SweepSection s;
    if (j.contains("axis")) {
        s.axis = rd.string(j["axis"], join(ptr, "axis"));
        try {
            sweep::axis_from_string(s.axis);
        } catch (const DomainError& e) {
            rd.fail(join(ptr, "axis"), e.what());
        }
    }
    if (j.contains("values")) s.values = rd.positive_list(j["values"], join(ptr, "values"));
    if (j.contains("rho_ratios")) s.rho_ratios = rd.positive_list(j["rho_ratios"], join(ptr, "rho_ratios"));
    if (j.contains("lambda_ratios")) {
        s.lambda_ratios = rd.positive_list(j["lambda_ratios"], join(ptr, "lambda_ratios"));
    }
    if (s.rho_ratios.empty()) rd.fail(join(ptr, "rho_ratios"), "must not be empty");
    if (s.lambda_ratios.empty()) rd.fail(join(ptr, "lambda_ratios"), "must not be empty");
    if (j.contains("timing_rhos")) s.timing_rhos = rd.positive_list(j["timing_rhos"], join(ptr, "timing_rhos"));
    if (j.contains("timing_paths")) s.timing_paths = rd.integer(j["timing_paths"], join(ptr, "timing_paths"), 1);
    if (j.contains("timing_repeats")) {
        s.timing_repeats = static_cast<int>(rd.integer(j["timing_repeats"], join(ptr, "timing_repeats"), 1));
    }
    if (j.contains("timing_c")) {
        const double c = rd.number(j["timing_c"], join(ptr, "timing_c"));
        if (!(c >= 0.0)) rd.fail(join(ptr, "timing_c"), "must be non-negative");
        s.timing_c = c;
    }
    if (j.contains("timing_b")) {
        const double b = rd.number(j["timing_b"], join(ptr, "timing_b"));
        if (!(b >= 0.0)) rd.fail(join(ptr, "timing_b"), "must be non-negative");
        s.timing_b = b;
    }
    if (s.timing_c.has_value() != s.timing_b.has_value()) {
        rd.fail(ptr, "give both 'timing_c' and 'timing_b' or neither");
    }
    return s;
}

}  // namespace

mc::SimConfig RunConfig::sim_config() const {
    mc::SimConfig s;
    s.n_paths = mc.paths;
    s.seed = mc.seed;
    s.chunk_size = mc.chunk_size;
    s.threads = mc.threads;
    s.real = model;
    s.altered = simulation_params();
    s.contract = contract;
    s.tranches = tranches;
    s.loss_spec = loss_spec;
    if (surface) s.surface = mc::SurfaceSpec{surface->time_bins, surface->loss_bins};
    return s;
}

int line_of(const std::string& text, const std::string& pointer) {
    try {
        return LineScanner(text, split_pointer(pointer)).run();
    } catch (...) {
        return 0;
    }
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto end = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(end > 0 ? end - 1 : 0), '\n'));
        throw ConfigError(std::string("malformed JSON: ") + e.what(), line);
    }
    const Reader rd(text);
    rd.allowed_keys(root, "",
                    {"model", "altered", "contract", "tranches", "loss_spec", "mc", "surface", "sweep",
                     "outputs"});
    RunConfig cfg;
    if (root.contains("model")) cfg.model = read_params(rd, root["model"], "/model");
    if (root.contains("altered") && !root["altered"].is_null()) {
        cfg.altered = read_params(rd, root["altered"], "/altered");
    }
    if (root.contains("contract")) cfg.contract = read_contract(rd, root["contract"], "/contract");
    if (root.contains("tranches")) cfg.tranches = read_tranches(rd, root["tranches"], "/tranches");
    if (root.contains("loss_spec")) {
        const std::string name = rd.string(root["loss_spec"], "/loss_spec");
        try {
            cfg.loss_spec = loss_spec_from_string(name);
        } catch (const DomainError& e) {
            rd.fail("/loss_spec", e.what());
        }
    }
    if (root.contains("mc")) cfg.mc = read_mc(rd, root["mc"], "/mc");
    if (root.contains("surface") && !root["surface"].is_null()) {
        const json& s = root["surface"];
        rd.allowed_keys(s, "/surface", {"time_bins", "loss_bins"});
        SurfaceSection sf;
        if (s.contains("time_bins")) sf.time_bins = static_cast<int>(rd.integer(s["time_bins"], "/surface/time_bins", 1));
        if (s.contains("loss_bins")) sf.loss_bins = static_cast<int>(rd.integer(s["loss_bins"], "/surface/loss_bins", 1));
        cfg.surface = sf;
    }
    if (root.contains("sweep")) cfg.sweep = read_sweep(rd, root["sweep"], "/sweep");
    if (root.contains("outputs")) {
        const json& o = root["outputs"];
        rd.allowed_keys(o, "/outputs", {"dir", "format"});
        if (o.contains("dir")) cfg.outputs.dir = rd.string(o["dir"], "/outputs/dir");
        if (o.contains("format")) {
            cfg.outputs.format = rd.string(o["format"], "/outputs/format");
            if (cfg.outputs.format != "csv" && cfg.outputs.format != "tsv") {
                rd.fail("/outputs/format", "format must be csv or tsv");
            }
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    auto params = [](const ModelParams& p) {
        ordered_json j;
        j["rho"] = p.rho();
        j["lambda"] = p.lambda();
        return j;
    };
    ordered_json root;
    root["model"] = params(cfg.model);
    if (cfg.altered) root["altered"] = params(*cfg.altered);
    root["contract"] = {{"maturity", cfg.contract.maturity()},
                        {"rate", cfg.contract.rate()},
                        {"periods_per_year", cfg.contract.periods_per_year()}};
    ordered_json tranches = ordered_json::array();
    for (const auto& t : cfg.tranches) tranches.push_back({t.attach(), t.detach()});
    root["tranches"] = tranches;
    root["loss_spec"] = to_string(cfg.loss_spec);
    root["mc"] = {{"paths", cfg.mc.paths},
                  {"seed", cfg.mc.seed},
                  {"chunk_size", cfg.mc.chunk_size},
                  {"threads", cfg.mc.threads}};
    if (cfg.surface) {
        root["surface"] = {{"time_bins", cfg.surface->time_bins}, {"loss_bins", cfg.surface->loss_bins}};
    }
    ordered_json sw;
    sw["axis"] = cfg.sweep.axis;
    sw["values"] = cfg.sweep.values;
    sw["rho_ratios"] = cfg.sweep.rho_ratios;
    sw["lambda_ratios"] = cfg.sweep.lambda_ratios;
    sw["timing_rhos"] = cfg.sweep.timing_rhos;
    sw["timing_paths"] = cfg.sweep.timing_paths;
    sw["timing_repeats"] = cfg.sweep.timing_repeats;
    if (cfg.sweep.timing_c) sw["timing_c"] = *cfg.sweep.timing_c;
    if (cfg.sweep.timing_b) sw["timing_b"] = *cfg.sweep.timing_b;
    root["sweep"] = sw;
    root["outputs"] = {{"dir", cfg.outputs.dir}, {"format", cfg.outputs.format}};
    return root.dump(2) + "\n";
}

}  // namespace cdois::config
