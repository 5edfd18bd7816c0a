#include "fdlink/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fdlink {

const char* to_string(DetectorKind k) {
    switch (k) {
        case DetectorKind::SwhExact: return "swh-exact";
        case DetectorKind::SwhLog: return "swh-log";
        case DetectorKind::SwhMaxLog: return "swh-maxlog";
        case DetectorKind::Epic: return "epic";
        case DetectorKind::Vamp: return "vamp";
    }
    return "?";
}

DetectorKind detector_from_string(const std::string& s) {
    if (s == "swh-exact") return DetectorKind::SwhExact;
    if (s == "swh-log") return DetectorKind::SwhLog;
    if (s == "swh-maxlog") return DetectorKind::SwhMaxLog;
    if (s == "epic") return DetectorKind::Epic;
    if (s == "vamp") return DetectorKind::Vamp;
    throw std::invalid_argument("unknown detector: " + s);
}

PrecoderKind precoder_from_string(const std::string& s) {
    if (s == "dft") return PrecoderKind::Dft;
    if (s == "sdft") return PrecoderKind::Sdft;
    if (s == "swh") return PrecoderKind::Swh;
    throw std::invalid_argument("unknown precoder: " + s);
}

double LinkConfig::sigma2_for(double ebn0_db_point) const {
    const double rate = 0.5;
    const double bits = static_cast<double>(bits_per_symbol());
    return 1.0 / (rate * bits * std::pow(10.0, ebn0_db_point / 10.0));
}

int LinkConfig::bits_per_symbol() const {
    int b = 0;
    while ((1 << b) < j) ++b;
    return b;
}

void LinkConfig::validate() const {
    if (!is_pow2(n) || n < 4) throw std::invalid_argument("config: n must be a power of two >= 4");
    if (j != 4 && j != 16 && j != 64) throw std::invalid_argument("config: j must be 4, 16 or 64");
    const bool map_detector = detector == DetectorKind::SwhExact ||
                              detector == DetectorKind::SwhLog ||
                              detector == DetectorKind::SwhMaxLog;
    if (map_detector && precoder != PrecoderKind::Swh)
        throw std::invalid_argument("config: " + std::string(to_string(detector)) +
                                    " requires precoder = swh");
    if (precoder != PrecoderKind::Dft) {
        if (!is_pow2(q) || q == 0 || q > n || n % q != 0)
            throw std::invalid_argument("config: q must be a power of two dividing n");
    }
    if (turbo_iters < 0) throw std::invalid_argument("config: turbo_iters must be >= 0");
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    if (min_frame_errors == 0 || max_frames == 0)
        throw std::invalid_argument("config: stop rule must be positive");
}

namespace {

std::vector<double> parse_grid(const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) {
        std::stringstream e(item);
        double x;
        if (!(e >> x)) throw std::invalid_argument("config: bad grid value '" + item + "'");
        out.push_back(x);
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

template <typename T>
T number_of(const std::string& val, const std::string& key, int lineno) {
    std::stringstream ss(val);
    T x;
    if (!(ss >> x) || !(ss >> std::ws).eof())
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": bad value for '" + key + "'");
    return x;
}

}  // namespace

LinkConfig parse_config(std::istream& in) {
    LinkConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "n") cfg.n = number_of<std::size_t>(val, key, lineno);
        else if (key == "q") cfg.q = number_of<std::size_t>(val, key, lineno);
        else if (key == "j") cfg.j = number_of<int>(val, key, lineno);
        else if (key == "precoder") cfg.precoder = precoder_from_string(val);
        else if (key == "detector") cfg.detector = detector_from_string(val);
        else if (key == "turbo_iters") cfg.turbo_iters = number_of<int>(val, key, lineno);
        else if (key == "self_iters") cfg.self_iters = number_of<int>(val, key, lineno);
        else if (key == "beta_scale") cfg.beta_scale = number_of<double>(val, key, lineno);
        else if (key == "beta_decay") cfg.beta_decay = number_of<double>(val, key, lineno);
        else if (key == "ebn0_db") cfg.ebn0_db = parse_grid(val);
        else if (key == "seed") cfg.seed = number_of<uint64_t>(val, key, lineno);
        else if (key == "min_frame_errors")
            cfg.min_frame_errors = number_of<std::size_t>(val, key, lineno);
        else if (key == "max_frames") cfg.max_frames = number_of<std::size_t>(val, key, lineno);
        else if (key == "threads") cfg.threads = number_of<int>(val, key, lineno);
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

LinkConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::ios_base::failure("cannot open config file: " + path);
    return parse_config(f);
}

}  // namespace fdlink
