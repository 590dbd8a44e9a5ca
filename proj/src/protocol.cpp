#include "bb84/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace bb84 {

namespace {

void require(bool ok, const char* field, const std::string& what) {
    if (!ok) throw ConfigError(ConfigErrorKind::InvalidValue, field, what);
}

bool unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void validate(const SessionConfig& c) {
    const DetectorConfig& d = c.detectors;
    require(unit_interval(d.efficiency), "detectors.efficiency", "must be in [0,1]");
    require(unit_interval(d.dark_prob), "detectors.dark_prob", "must be in [0,1]");
    require(d.blind_threshold > 0.0 && std::isfinite(d.blind_threshold), "detectors.blind_threshold", "must be positive");
    require(d.click_threshold > 0.0 && std::isfinite(d.click_threshold), "detectors.click_threshold", "must be positive");
    require(d.superlinear_exponent >= 1.0 && std::isfinite(d.superlinear_exponent), "detectors.superlinear_exponent",
            "must be >= 1");
    require(unit_interval(c.channel.eta), "channel.eta", "must be in [0,1]");
    require(unit_interval(c.channel.eta_ae), "channel.eta_ae", "must be in [0,1]");
    require(unit_interval(c.channel.eta_eb), "channel.eta_eb", "must be in [0,1]");
    require(c.qber_sample_fraction > 0.0 && c.qber_sample_fraction <= 1.0, "run.qber_sample", "must be in (0,1]");

    const AttackStrategy& a = c.attack;
    require(unit_interval(a.fraction), "attack.fraction", "must be in [0,1]");
    require(!a.cw_power || (*a.cw_power >= 0.0 && std::isfinite(*a.cw_power)), "attack.p_cw", "must be >= 0");
    require(!a.pulse_power || (*a.pulse_power >= 0.0 && std::isfinite(*a.pulse_power)), "attack.p_pulse", "must be >= 0");
    require(!a.noise_rate || unit_interval(*a.noise_rate), "attack.noise_rate", "must be in [0,1]");
    require(a.partial_run_length >= 1, "attack.partial_run_length", "must be >= 1");
}

std::uint64_t SessionTranscript::key_length() const noexcept {
    return static_cast<std::uint64_t>(
        std::count_if(sifted.begin(), sifted.end(), [](const SiftedBit& s) { return !s.sampled; }));
}

SessionTranscript run_session(const SessionConfig& config) {
    validate(config);

    SessionTranscript t;
    t.gates = config.gates;
    t.records.reserve(config.gates);

    const std::uint64_t seed = config.seed;
    RandomSource alice_rng(seed, "alice");
    RandomSource line_rng(seed, "channel");
    RandomSource eve_line_rng(seed, "eve-channel");
    RandomSource basis_rng(seed, "bob-basis", config.basis_rng_mode);
    RandomSource optics_rng(seed, "bob-optics");
    RandomSource noise_rng(seed, "detector-noise");
    RandomSource sample_rng(seed, "qber-sample");

    std::optional<Eavesdropper> eve;
    if (config.attack.kind != AttackKind::NoAttack && !config.disconnected)
        eve.emplace(config.attack, config.receiver, config.detectors, seed);

    Receiver bob(config.receiver, config.detectors);
    bob.start(basis_rng);
    const double alice_side = eve ? config.channel.eta_ae : config.channel.eta;

    for (std::uint64_t g = 0; g < config.gates; ++g) {
        GateRecord rec;
        rec.gate_index = g;
        rec.alice = prepare(alice_rng);
        GateIllumination light = transmit(rec.alice, alice_side, line_rng);
        if (eve) {
            Interception x = eve->intercept(light, basis_rng);
            rec.eve = x.record;
            light = attenuate(x.to_bob, config.channel.eta_eb, eve_line_rng);
        }
        if (config.disconnected) {
            light.clear();
            rec.alice.surviving = false;
        }
        GateResult r = bob.process_gate(light, basis_rng, optics_rng, noise_rng);
        rec.bob_basis = r.chosen_basis;
        rec.outcome = r.outcome;
        if (is_coincidence(rec.outcome)) ++t.coincidence_count;
        t.records.push_back(rec);
    }

    t.sifted = sift(t.records);
    t.qber_sample = estimate_qber(t.sifted, config.qber_sample_fraction, sample_rng);
    return t;
}

namespace {

bool eve_dictated(const GateRecord& rec, const SingleClick& click) {
    return rec.eve.knows_bob_outcome_candidate && rec.eve.measured_basis == click.basis;
}

}  // namespace

std::vector<SiftedBit> sift(std::span<const GateRecord> records) {
    std::vector<SiftedBit> out;
    for (const GateRecord& rec : records) {
        const SingleClick* click = single_click(rec.outcome);
        if (!click || click->basis != rec.alice.basis) continue;
        SiftedBit s;
        s.gate_index = rec.gate_index;
        s.alice_bit = rec.alice.bit;
        s.bob_bit = click->bit;
        s.eve_knows = eve_dictated(rec, *click);
        if (rec.eve.acted) s.eve_bit = rec.eve.measured_bit;
        out.push_back(s);
    }
    return out;
}

QberSample estimate_qber(std::span<SiftedBit> sifted, double sample_fraction, RandomSource& rng) {
    if (!(sample_fraction > 0.0 && sample_fraction <= 1.0))
        throw std::invalid_argument("estimate_qber: sample_fraction must be in (0,1]");
    QberSample q;
    const std::size_t n = sifted.size();
    if (n == 0) return q;

    auto k = static_cast<std::size_t>(std::ceil(sample_fraction * static_cast<double>(n)));
    k = std::min(k, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(order[i], order[j]);
        SiftedBit& s = sifted[order[i]];
        s.sampled = true;
        if (s.alice_bit != s.bob_bit) ++q.mismatches;
    }
    q.sample_size = k;
    return q;
}

double eve_knowledge_fraction(const SessionTranscript& transcript) {
    std::uint64_t key = 0;
    std::uint64_t known = 0;
    for (const SiftedBit& s : transcript.sifted) {
        if (s.sampled) continue;
        ++key;
        if (s.eve_knows && s.eve_bit == s.bob_bit) ++known;
    }
    return key == 0 ? 0.0 : static_cast<double>(known) / static_cast<double>(key);
}

GateTally tally(const SessionTranscript& transcript) {
    GateTally t;
    for (const GateRecord& rec : transcript.records) {
        if (rec.eve.acted) ++t.eve_acted;
        t.bright_photons_sent += rec.eve.bright_photons_sent;
        if (std::holds_alternative<NoClick>(rec.outcome)) {
            ++t.no_click;
        } else if (is_coincidence(rec.outcome)) {
            ++t.coincidence;
        } else {
            const SingleClick& click = std::get<SingleClick>(rec.outcome);
            if (click.basis == rec.alice.basis)
                ++t.sifted;
            else
                ++t.basis_mismatch;
            if (eve_dictated(rec, click) && rec.eve.measured_bit == click.bit) ++t.eve_delivered;
        }
    }
    return t;
}

namespace {

void put_double(std::ostream& os, double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    os.write(buf, end - buf);
}

char basis_char(std::optional<Basis> b) {
    if (!b) return '-';
    return *b == Basis::Rectilinear ? '+' : 'x';
}

}  // namespace

void write_transcript(std::ostream& os, const SessionTranscript& t) {
    os << "# gates=" << t.gates << " coincidences=" << t.coincidence_count << '\n';
    for (const GateRecord& r : t.records) {
        os << r.gate_index << ' ' << r.alice.bit << basis_char(r.alice.basis) << (r.alice.surviving ? 's' : 'l') << ' ';
        if (r.eve.acted) {
            os << 'E' << basis_char(r.eve.measured_basis);
            if (r.eve.measured_bit)
                os << *r.eve.measured_bit;
            else
                os << '-';
            os << (r.eve.knows_bob_outcome_candidate ? 'k' : '.') << ':';
            put_double(os, r.eve.bright_photons_sent);
        } else {
            os << '.';
        }
        os << ' ' << basis_char(r.bob_basis) << ' ';
        std::visit(
            [&os](const auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, NoClick>)
                    os << 'N';
                else if constexpr (std::is_same_v<T, SingleClick>)
                    os << 'S' << basis_char(o.basis) << o.bit;
                else
                    os << 'C' << static_cast<int>(o.detectors);
            },
            r.outcome);
        os << '\n';
    }
    os << "# sifted=" << t.sifted.size() << '\n';
    for (const SiftedBit& s : t.sifted) {
        os << s.gate_index << ' ' << s.alice_bit << s.bob_bit << ' ' << (s.eve_knows ? 'k' : '.')
           << (s.eve_bit ? static_cast<char>('0' + *s.eve_bit) : '-') << (s.sampled ? " q" : "") << '\n';
    }
    os << "# qber_sample=" << t.qber_sample.sample_size << ' ' << t.qber_sample.mismatches << '\n';
}

}  // namespace bb84
