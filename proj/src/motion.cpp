#include "gather/kernel.hpp"

#include <algorithm>

namespace gather {

MotionState MotionState::still(Location at, Rational from_time, std::optional<Rational> until) {
    MotionState s;
    s.kind = Kind::Still;
    s.at = std::move(at);
    s.from_time = std::move(from_time);
    s.until = std::move(until);
    return s;
}

MotionState MotionState::moving(NodeId from, NodeId to, Rational depart, Rational speed) {
    MotionState s;
    s.kind = Kind::Moving;
    s.from = from;
    s.to = to;
    s.from_time = depart;
    s.depart = std::move(depart);
    s.speed = std::move(speed);
    s.until = s.depart + 1 / s.speed;
    return s;
}

Rational MotionState::end_time() const { return until ? *until : from_time; }

Location MotionState::position(const Rational& t) const {
    if (kind == Kind::Still) return at;
    return Location::on_edge(from, to, (t - depart) * speed);
}

namespace {

// Position along edge {lo, hi} measured from lo, as slope * t + intercept.
struct Affine {
    Rational slope, intercept;
};

Affine along(const MotionState& m, NodeId lo) {
    if (m.kind == MotionState::Kind::Still) return {Rational(0), m.at.edge.offset};
    // offset from `from` = (t - depart) * speed
    if (m.from == lo) return {m.speed, -m.depart * m.speed};
    return {-m.speed, 1 + m.depart * m.speed};
}

bool on_edge(const MotionState& m, NodeId lo, NodeId hi) {
    if (m.kind == MotionState::Kind::Still) return !m.at.at_node() && m.at.edge.u == lo && m.at.edge.v == hi;
    return std::min(m.from, m.to) == lo && std::max(m.from, m.to) == hi;
}

// Times at which the piece sits on node x.
void node_times(const MotionState& m, NodeId x, std::vector<Rational>& out, bool& always) {
    always = false;
    if (m.kind == MotionState::Kind::Still) {
        always = m.at.at_node() && m.at.node == x;
        return;
    }
    if (m.from == x) out.push_back(m.depart);
    if (m.to == x) out.push_back(*m.until);
}

}  // namespace

std::optional<Rational> solve_meeting_time(const MotionState& a, const MotionState& b, const Rational& from,
                                           bool strictly_after) {
    Rational lo = std::max(from, std::max(a.from_time, b.from_time));
    std::optional<Rational> hi;
    if (a.until) hi = *a.until;
    if (b.until) hi = hi ? std::min(*hi, *b.until) : *b.until;
    if (hi && lo > *hi) return std::nullopt;
    auto admissible = [&](const Rational& t) {
        if (t < lo) return false;
        if (hi && t > *hi) return false;
        if (strictly_after && t <= from) return false;
        return true;
    };
    // continuous coincidence on the whole window: earliest admissible instant
    auto whole_window = [&]() -> std::optional<Rational> {
        if (!strictly_after || lo > from) return lo;
        return std::nullopt;  // coincident already at `from`: no new meeting after it
    };

    const bool a_still = a.kind == MotionState::Kind::Still;
    const bool b_still = b.kind == MotionState::Kind::Still;
    if (a_still && b_still) {
        if (a.at == b.at) return whole_window();
        return std::nullopt;
    }

    // Same undirected edge: solve the affine equation.
    const MotionState& mover = a_still ? b : a;
    const NodeId elo = std::min(mover.from, mover.to), ehi = std::max(mover.from, mover.to);
    if (on_edge(a, elo, ehi) && on_edge(b, elo, ehi)) {
        const Affine pa = along(a, elo), pb = along(b, elo);
        if (pa.slope == pb.slope) {
            if (pa.intercept == pb.intercept) return whole_window();
            return std::nullopt;
        }
        Rational t = (pb.intercept - pa.intercept) / (pa.slope - pb.slope);
        if (admissible(t)) return t;
        return std::nullopt;
    }

    // Otherwise they can only coincide at nodes.
    std::vector<Rational> ta, tb;
    bool a_always = false, b_always = false;
    std::optional<Rational> best;
    auto consider = [&](const Rational& t) {
        if (admissible(t) && (!best || t < *best)) best = t;
    };
    std::vector<NodeId> nodes;
    if (!a_still) nodes = {a.from, a.to};
    if (!b_still) {
        nodes.push_back(b.from);
        nodes.push_back(b.to);
    }
    for (NodeId x : nodes) {
        ta.clear();
        tb.clear();
        node_times(a, x, ta, a_always);
        node_times(b, x, tb, b_always);
        if (a_always)
            for (const auto& t : tb) consider(t);
        else if (b_always)
            for (const auto& t : ta) consider(t);
        else
            for (const auto& t1 : ta)
                for (const auto& t2 : tb)
                    if (t1 == t2) consider(t1);
    }
    return best;
}

}  // namespace gather
