#pragma once

#include <sstream>
#include <string>

#include "bb84/protocol.hpp"

namespace testing {

inline bb84::DetectorConfig ideal() {
    bb84::DetectorConfig d;
    d.efficiency = 1.0;
    d.dark_prob = 0.0;
    return d;
}

inline bb84::SessionConfig session(bb84::ReceiverArchitecture arch, bb84::AttackKind kind, std::uint64_t gates,
                                   std::uint64_t seed = 1) {
    bb84::SessionConfig c;
    c.receiver = arch;
    c.attack.kind = kind;
    c.gates = gates;
    c.seed = seed;
    return c;
}

inline std::string dump(const bb84::SessionTranscript& t) {
    std::ostringstream os;
    bb84::write_transcript(os, t);
    return os.str();
}

/// Gate outcomes only, ignoring Eve's bookkeeping.
inline std::string outcomes(const bb84::SessionTranscript& t) {
    std::string s;
    for (const auto& r : t.records) {
        std::visit(
            [&s](const auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, bb84::NoClick>)
                    s += 'N';
                else if constexpr (std::is_same_v<T, bb84::SingleClick>)
                    s += static_cast<char>('a' + 2 * bb84::basis_bit(o.basis) + o.bit);
                else
                    s += 'C';
            },
            r.outcome);
    }
    return s;
}

}  // namespace testing
