#pragma once

// Brute-force reference for solve_meeting_time: scan a fine time grid and
// compare positions directly. Fixtures are built so that every exact meeting
// time lies on the grid (departure times and interior offsets are multiples
// of 1/Q, speeds are in {1,2,3,4}, so every crossing time is a multiple of
// 1/(Q * lcm(1..8)) = 1/(Q * 840)).

#include "gather/kernel.hpp"
#include "gather/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace oracle {

inline constexpr long kQ = 4;
inline constexpr long kGrid = kQ * 840;
inline constexpr long kCap = 4;  // scan window ends here when both pieces are unbounded

struct Fixture {
    gather::MotionState a, b;
    gather::Rational from;
    bool strictly_after = false;
    std::string describe() const;
};

inline std::string piece_str(const gather::MotionState& m) {
    using gather::to_string;
    if (m.kind == gather::MotionState::Kind::Still)
        return "still " + m.at.str() + " [" + to_string(m.from_time) + "," + (m.until ? to_string(*m.until) : "inf") + "]";
    return "move " + std::to_string(m.from) + "->" + std::to_string(m.to) + " dep " + to_string(m.depart) + " v " +
           to_string(m.speed);
}

inline std::string Fixture::describe() const {
    return piece_str(a) + " | " + piece_str(b) + " | from " + gather::to_string(from) + (strictly_after ? " strict" : "");
}

// On path 0 - 1 - 2: movers pick an edge and a direction, still pieces sit at
// a node or at a 1/Q point inside an edge.
inline gather::MotionState random_piece(gather::Rng& rng) {
    using namespace gather;
    auto grid_time = [&] { return make_rational(static_cast<long>(rng.below(2 * kQ + 1)), kQ); };
    const NodeId lo = static_cast<NodeId>(rng.below(2));
    if (rng.chance(3, 5)) {
        const bool forward = rng.chance(1, 2);
        return MotionState::moving(forward ? lo : lo + 1, forward ? lo + 1 : lo, grid_time(),
                                   Rational(static_cast<long>(1 + rng.below(4))));
    }
    Location at = rng.chance(1, 2) ? Location::of_node(static_cast<NodeId>(rng.below(3)))
                                   : Location::on_edge(lo, lo + 1, make_rational(static_cast<long>(1 + rng.below(kQ - 1)), kQ));
    const Rational start = grid_time();
    std::optional<Rational> until;
    if (rng.chance(1, 2)) until = start + grid_time();
    return MotionState::still(at, start, until);
}

inline Fixture random_fixture(gather::Rng& rng) {
    Fixture f{random_piece(rng), random_piece(rng), gather::make_rational(static_cast<long>(rng.below(2 * kQ + 1)), kQ),
              rng.chance(1, 3)};
    return f;
}

inline std::optional<gather::Rational> brute_force(const Fixture& f) {
    using namespace gather;
    Rational lo = std::max(f.from, std::max(f.a.from_time, f.b.from_time));
    Rational hi(kCap);
    if (f.a.until) hi = std::min(hi, *f.a.until);
    if (f.b.until) hi = std::min(hi, *f.b.until);
    const Rational step = make_rational(1, kGrid);
    Rational t = Rational(ceil_of(lo * kGrid)) * step;
    // A meeting is the onset of a contact: coincident now, and either at the
    // start of the window or apart one grid step earlier. Strict queries ask
    // for a contact that begins after `from`.
    bool before = false;
    for (bool first = true; t <= hi; t += step, first = false) {
        const bool now = f.a.position(t) == f.b.position(t);
        const bool onset = now && (first || !before);
        before = now;
        if (!onset) continue;
        if (f.strictly_after && t <= f.from) continue;
        return t;
    }
    return std::nullopt;
}

}  // namespace oracle
