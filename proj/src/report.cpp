#include "bb84/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

namespace bb84 {

SessionResult run_one(const SessionConfig& config, std::uint64_t session_index) {
    const SessionTranscript t = run_session(config);
    SessionResult r;
    r.session = session_index;
    r.seed = config.seed;
    r.gates = config.gates;
    r.defense = assess(t, calibrate_p_c0(config));
    r.sifted_rate = t.gates == 0 ? 0.0 : static_cast<double>(t.sifted.size()) / static_cast<double>(t.gates);
    r.eve_knowledge_fraction = eve_knowledge_fraction(t);
    return r;
}

std::vector<SessionResult> run_batch(const SimulationConfig& config, unsigned threads) {
    validate(config);
    const std::uint64_t n = config.sessions;
    std::vector<SessionResult> results(n);
    if (n == 0) return results;

    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::uint64_t i = next++; i < n && !failed; i = next++) {
            try {
                SessionConfig session = config.session;
                session.seed = session_seed(config.session.seed, i);
                results[i] = run_one(session, i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

namespace {

template <class Get>
Stat stat_of(std::span<const SessionResult> rs, Get get) {
    Stat s;
    if (rs.empty()) return s;
    double sum = 0.0;
    for (const auto& r : rs) sum += get(r);
    s.mean = sum / static_cast<double>(rs.size());
    if (rs.size() > 1) {
        double ss = 0.0;
        for (const auto& r : rs) ss += (get(r) - s.mean) * (get(r) - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(rs.size() - 1));
    }
    return s;
}

}  // namespace

BatchSummary summarize(std::span<const SessionResult> rs) {
    BatchSummary b;
    b.count = rs.size();
    b.sifted_rate = stat_of(rs, [](const SessionResult& r) { return r.sifted_rate; });
    b.qber = stat_of(rs, [](const SessionResult& r) { return r.defense.qber; });
    b.coincidence_probability = stat_of(rs, [](const SessionResult& r) { return r.defense.p_c_prime_hat; });
    b.eve_knowledge_fraction = stat_of(rs, [](const SessionResult& r) { return r.eve_knowledge_fraction; });
    b.leaked_bits_bound = stat_of(rs, [](const SessionResult& r) { return r.defense.leaked_bits_bound; });
    b.final_key_bound = stat_of(rs, [](const SessionResult& r) { return r.defense.final_key_bound; });
    return b;
}

namespace {

constexpr const char* kCsvHeader =
    "session,seed,gates,p_c_prime_hat,p_c0_hat,extra_coincidences,leaked_bits_bound,sifted_length,qber,"
    "final_key_bound,sifted_rate,eve_knowledge_fraction";

template <class T>
void put(std::ostream& os, T value) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    os.write(buf, end - buf);
}

template <class T>
T get(std::string_view field) {
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw std::runtime_error("read_csv: bad field '" + std::string(field) + "'");
    return value;
}

}  // namespace

void write_csv(std::ostream& os, std::span<const SessionResult> results) {
    os << "# schema=1\n" << kCsvHeader << '\n';
    for (const SessionResult& r : results) {
        const DefenseReport& d = r.defense;
        put(os, r.session), os << ',';
        put(os, r.seed), os << ',';
        put(os, r.gates), os << ',';
        put(os, d.p_c_prime_hat), os << ',';
        put(os, d.p_c0_hat), os << ',';
        put(os, d.extra_coincidences), os << ',';
        put(os, d.leaked_bits_bound), os << ',';
        put(os, d.sifted_length), os << ',';
        put(os, d.qber), os << ',';
        put(os, d.final_key_bound), os << ',';
        put(os, r.sifted_rate), os << ',';
        put(os, r.eve_knowledge_fraction);
        os << '\n';
    }
}

std::vector<SessionResult> read_csv(std::istream& is) {
    std::vector<SessionResult> out;
    std::string line;
    if (!std::getline(is, line) || line != "# schema=1") throw std::runtime_error("read_csv: missing schema line");
    if (!std::getline(is, line) || line != kCsvHeader) throw std::runtime_error("read_csv: unexpected header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
            f.push_back(rest.substr(0, pos));
        f.push_back(rest);
        if (f.size() != 12) throw std::runtime_error("read_csv: expected 12 fields");
        SessionResult r;
        r.session = get<std::uint64_t>(f[0]);
        r.seed = get<std::uint64_t>(f[1]);
        r.gates = get<std::uint64_t>(f[2]);
        r.defense.p_c_prime_hat = get<double>(f[3]);
        r.defense.p_c0_hat = get<double>(f[4]);
        r.defense.extra_coincidences = get<std::int64_t>(f[5]);
        r.defense.leaked_bits_bound = get<double>(f[6]);
        r.defense.sifted_length = get<std::uint64_t>(f[7]);
        r.defense.qber = get<double>(f[8]);
        r.defense.final_key_bound = get<double>(f[9]);
        r.sifted_rate = get<double>(f[10]);
        r.eve_knowledge_fraction = get<double>(f[11]);
        out.push_back(r);
    }
    return out;
}

namespace {

using nlohmann::ordered_json;

ordered_json to_json(const Stat& s, std::uint64_t count) {
    if (count == 0) return {{"mean", nullptr}, {"stddev", nullptr}};
    return {{"mean", s.mean}, {"stddev", s.stddev}};
}

ordered_json config_json(const SimulationConfig& c) {
    const SessionConfig& s = c.session;
    ordered_json a = {{"strategy", to_string(s.attack)}, {"prudent_noise", s.attack.prudent_noise},
                      {"partial_run_length", s.attack.partial_run_length}};
    a["p_cw"] = s.attack.cw_power ? ordered_json(*s.attack.cw_power) : ordered_json(nullptr);
    a["p_pulse"] = s.attack.pulse_power ? ordered_json(*s.attack.pulse_power) : ordered_json(nullptr);
    a["noise_rate"] = s.attack.noise_rate ? ordered_json(*s.attack.noise_rate) : ordered_json(nullptr);
    return {
        {"preset", c.preset},
        {"gates", s.gates},
        {"sessions", c.sessions},
        {"seed", s.seed},
        {"qber_sample", s.qber_sample_fraction},
        {"receiver", {{"architecture", to_string(s.receiver)},
                      {"basis_rng", s.basis_rng_mode == SourceMode::Private ? "private" : "compromised"}}},
        {"detectors", {{"efficiency", s.detectors.efficiency},
                       {"dark_prob", s.detectors.dark_prob},
                       {"blind_threshold", s.detectors.blind_threshold},
                       {"click_threshold", s.detectors.click_threshold},
                       {"superlinear_exponent", s.detectors.superlinear_exponent}}},
        {"channel", {{"eta", s.channel.eta}, {"eta_ae", s.channel.eta_ae}, {"eta_eb", s.channel.eta_eb}}},
        {"attack", a},
    };
}

}  // namespace

void write_json(std::ostream& os, const SimulationConfig& config, std::span<const SessionResult> results) {
    ordered_json sessions = ordered_json::array();
    for (const SessionResult& r : results) {
        const DefenseReport& d = r.defense;
        sessions.push_back({{"session", r.session},
                            {"seed", r.seed},
                            {"gates", r.gates},
                            {"p_c_prime_hat", d.p_c_prime_hat},
                            {"p_c0_hat", d.p_c0_hat},
                            {"extra_coincidences", d.extra_coincidences},
                            {"leaked_bits_bound", d.leaked_bits_bound},
                            {"sifted_length", d.sifted_length},
                            {"qber", d.qber},
                            {"final_key_bound", d.final_key_bound},
                            {"sifted_rate", r.sifted_rate},
                            {"eve_knowledge_fraction", r.eve_knowledge_fraction}});
    }
    const BatchSummary b = summarize(results);
    ordered_json doc = {
        {"schema", 1},
        {"config", config_json(config)},
        {"sessions", sessions},
        {"summary",
         {{"count", b.count},
          {"sifted_rate", to_json(b.sifted_rate, b.count)},
          {"qber", to_json(b.qber, b.count)},
          {"coincidence_probability", to_json(b.coincidence_probability, b.count)},
          {"eve_knowledge_fraction", to_json(b.eve_knowledge_fraction, b.count)},
          {"leaked_bits_bound", to_json(b.leaked_bits_bound, b.count)},
          {"final_key_bound", to_json(b.final_key_bound, b.count)}}},
    };
    os << doc.dump(2) << '\n';
}

void emit(const SimulationConfig& config, std::span<const SessionResult> results) {
    namespace fs = std::filesystem;
    std::vector<fs::path> written;
    auto cleanup = [&] {
        std::error_code ignored;
        for (const auto& p : written) fs::remove(p, ignored);
    };
    auto write_file = [&](const fs::path& path, auto&& body) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
        written.push_back(path);
        body(out);
        out.flush();
        if (!out) throw IoError("write failed for '" + path.string() + "'");
    };

    try {
        std::error_code ec;
        fs::create_directories(config.out_dir, ec);
        if (ec) throw IoError("cannot create '" + config.out_dir.string() + "': " + ec.message());
        if (config.format != OutputFormat::Json)
            write_file(config.out_dir / "sessions.csv", [&](std::ostream& os) { write_csv(os, results); });
        if (config.format != OutputFormat::Csv)
            write_file(config.out_dir / "summary.json", [&](std::ostream& os) { write_json(os, config, results); });
    } catch (...) {
        cleanup();
        throw;
    }
}

}  // namespace bb84
