#include "gather/kernel.hpp"

#include <algorithm>
#include <stdexcept>

namespace gather {

namespace {

enum class Status { Dormant, Active, Crashed, Terminated };

struct Agent;
class Kernel;

class Context final : public AgentContext {
public:
    Context(Kernel* k, int idx) : kernel_(k), index_(idx) {}
    Rational local_time() const override;
    void transition(const std::string& from, const std::string& to,
                    std::vector<std::pair<std::string, std::string>> payload) override;

private:
    Kernel* kernel_;
    int index_;
};

struct Agent {
    const AgentSpec* spec = nullptr;
    Label label = 0;
    Rational speed, inv_speed;
    Status status = Status::Dormant;
    std::unique_ptr<AgentProgram> prog;
    std::unique_ptr<Context> ctx;
    bool woken = false;
    Rational wake_time;

    // at node `node` unless moving; while moving: node -> to
    NodeId node = 0;
    bool moving = false;
    NodeId to = 0;
    Port exit = 0, entry = -1;
    Rational depart, arrive;

    bool pending = false;
    bool wait_forever = true;
    Rational wait_until;

    // crashed in the interior of an edge
    bool crashed_mid = false;
    Location frozen;
    NodeId frozen_from = 0;

    std::optional<Rational> crash_at;
    bool crash_done = false;
    std::shared_ptr<const AgentMemory> crash_snapshot;
};

class Kernel {
public:
    Kernel(const Scenario& s, const ProgramFactory& f, TraceSink& sink, const RunOptions& opt)
        : s_(s), g_(*s.graph), sink_(sink), opt_(opt) {
        std::vector<const AgentSpec*> specs;
        for (const auto& a : s.agents) specs.push_back(&a);
        std::sort(specs.begin(), specs.end(), [](auto* x, auto* y) { return x->label < y->label; });
        agents_.resize(specs.size());
        for (std::size_t i = 0; i < specs.size(); ++i) {
            Agent& a = agents_[i];
            a.spec = specs[i];
            a.label = specs[i]->label;
            a.speed = specs[i]->speed;
            a.inv_speed = 1 / a.speed;
            a.node = specs[i]->start;
            a.prog = f(*specs[i], s);
            a.ctx = std::make_unique<Context>(this, static_cast<int>(i));
            if (specs[i]->crash && specs[i]->crash->when == CrashSpec::When::At) a.crash_at = specs[i]->crash->time;
        }
        contact_.assign(agents_.size() * agents_.size(), 0);
        horizon_ = opt.horizon ? opt.horizon : s.horizon;
    }

    RunResult go();

    // context hooks
    Rational local_time(int i) const { return now_ - agents_[i].wake_time; }
    void transition(int i, const std::string& from, const std::string& to,
                    std::vector<std::pair<std::string, std::string>> payload) {
        Agent& a = agents_[i];
        SimEvent e;
        e.time = now_;
        e.kind = EventKind::Transition;
        e.agent = a.label;
        e.where = location_of(a);
        e.fields.emplace_back("from", from);
        e.fields.emplace_back("to", to);
        for (auto& kv : payload) e.fields.push_back(std::move(kv));
        push(std::move(e));
        // reactive crash trigger
        if (a.spec->crash && a.spec->crash->when == CrashSpec::When::OnState && !a.crash_at) {
            const std::string role = to.substr(0, to.find('/'));
            if (role == a.spec->crash->state) a.crash_at = now_ + a.spec->crash->delay;
        }
    }

private:
    bool stationary(const Agent& a) const { return a.status != Status::Active || !a.moving; }

    Location location_of(const Agent& a) const {
        if (a.status == Status::Crashed && a.crashed_mid) return a.frozen;
        if (a.status == Status::Active && a.moving) {
            return Location::on_edge(a.node, a.to, (now_ - a.depart) * a.speed);
        }
        return Location::of_node(a.node);
    }

    // last node of an agent sitting in an edge interior
    NodeId anchor_of(const Agent& a) const {
        if (a.status == Status::Crashed && a.crashed_mid) return a.frozen_from;
        return a.node;
    }

    MotionState piece_of(const Agent& a) const {
        if (a.status == Status::Active && a.moving) return MotionState::moving(a.node, a.to, a.depart, a.speed);
        return MotionState::still(location_of(a), now_);
    }

    void push(SimEvent e) {
        if (sink_.wants(e.kind)) buffer_.push_back(std::move(e));
    }

    void flush() {
        std::stable_sort(buffer_.begin(), buffer_.end(), [](const SimEvent& x, const SimEvent& y) {
            const int rx = event_rank(x.kind), ry = event_rank(y.kind);
            if (rx != ry) return rx < ry;
            if (x.where && y.where) {
                if (location_less(*x.where, *y.where)) return true;
                if (location_less(*y.where, *x.where)) return false;
            }
            const Label lx = x.agent ? x.agent : (x.agents.empty() ? 0 : x.agents.front());
            const Label ly = y.agent ? y.agent : (y.agents.empty() ? 0 : y.agents.front());
            return lx < ly;
        });
        for (const auto& e : buffer_) sink_.emit(e);
        buffer_.clear();
    }

    std::shared_ptr<const AgentMemory> memory_of(const Agent& a) const {
        if (a.status == Status::Crashed) return a.crash_snapshot;
        return a.prog->snapshot();
    }

    Peer peer_view(const Agent& observer, const Agent& other, bool mid_edge,
                   const std::shared_ptr<const AgentMemory>& mem) const {
        Peer p;
        p.memory = mem;
        p.crashed = other.status == Status::Crashed;
        p.declared = other.status == Status::Terminated;
        p.dormant = other.status == Status::Dormant;
        p.mid_edge = mid_edge;
        p.same_origin = !mid_edge || anchor_of(observer) == anchor_of(other);
        return p;
    }

    std::optional<Rational> next_time() const;
    void process();
    void do_crash(Agent& a);
    void do_wake(Agent& a, Label cause);
    void do_meetings();
    void do_decisions();
    void recompute_contacts();
    std::vector<std::vector<int>> groups() const;

    char& contact(int i, int j) { return contact_[i * agents_.size() + j]; }
    char contact(int i, int j) const { return contact_[i * agents_.size() + j]; }

    const Scenario& s_;
    const PortGraph& g_;
    TraceSink& sink_;
    const RunOptions& opt_;
    std::optional<Rational> horizon_;
    std::vector<Agent> agents_;
    std::vector<char> contact_;
    std::vector<SimEvent> buffer_;
    Rational now_{0};
    std::uint64_t steps_ = 0, traversals_ = 0;
};

Rational Context::local_time() const { return kernel_->local_time(index_); }

void Context::transition(const std::string& from, const std::string& to,
                         std::vector<std::pair<std::string, std::string>> payload) {
    kernel_->transition(index_, from, to, std::move(payload));
}

std::optional<Rational> Kernel::next_time() const {
    std::optional<Rational> best;
    auto offer = [&](const Rational& t) {
        if (!best || t < *best) best = t;
    };
    for (const Agent& a : agents_) {
        if (a.status == Status::Dormant && !a.woken && a.spec->wake) offer(*a.spec->wake);
        if (a.crash_at && !a.crash_done && (a.status == Status::Dormant || a.status == Status::Active))
            offer(*a.crash_at);
        if (a.status == Status::Active) {
            if (a.moving) offer(a.arrive);
            else if (!a.wait_forever) offer(a.wait_until);
        }
    }
    // interior meetings: only agents on a common edge can meet between events
    const int k = static_cast<int>(agents_.size());
    for (int i = 0; i < k; ++i) {
        const Agent& a = agents_[i];
        const bool a_mov = a.status == Status::Active && a.moving;
        const bool a_mid = a_mov || (a.status == Status::Crashed && a.crashed_mid);
        if (!a_mid) continue;
        for (int j = i + 1; j < k; ++j) {
            const Agent& b = agents_[j];
            const bool b_mov = b.status == Status::Active && b.moving;
            const bool b_mid = b_mov || (b.status == Status::Crashed && b.crashed_mid);
            if (!b_mid || (!a_mov && !b_mov) || contact(i, j)) continue;
            const NodeId alo = a_mov ? std::min(a.node, a.to) : a.frozen.edge.u;
            const NodeId ahi = a_mov ? std::max(a.node, a.to) : a.frozen.edge.v;
            const NodeId blo = b_mov ? std::min(b.node, b.to) : b.frozen.edge.u;
            const NodeId bhi = b_mov ? std::max(b.node, b.to) : b.frozen.edge.v;
            if (alo != blo || ahi != bhi) continue;
            if (auto t = solve_meeting_time(piece_of(a), piece_of(b), now_, true)) offer(*t);
        }
    }
    return best;
}

void Kernel::do_crash(Agent& a) {
    a.crash_done = true;
    const Location at = location_of(a);
    const FaultModel kind = a.spec->crash->kind;
    if (kind == FaultModel::Motion) {
        // A crash at the arrival instant happens at the endpoint: let the
        // frozen memory reflect the completed traversal.
        if (a.status == Status::Active && a.moving && at.at_node() && at.node == a.to)
            a.prog->on_arrival(*a.ctx, a.entry, g_.degree(a.to));
        a.crash_snapshot = a.prog->snapshot();
    }
    if (a.status == Status::Active && a.moving) {
        if (at.at_node()) {
            a.node = at.node;
        } else {
            a.crashed_mid = true;
            a.frozen = at;
            a.frozen_from = a.node;
        }
        a.moving = false;
    }
    a.status = Status::Crashed;
    SimEvent e;
    e.time = now_;
    e.kind = EventKind::Crash;
    e.agent = a.label;
    e.where = at;
    e.fields.emplace_back("fault", fault_name(kind));
    push(std::move(e));
}

void Kernel::do_wake(Agent& a, Label cause) {
    a.status = Status::Active;
    a.woken = true;
    a.wake_time = now_;
    a.pending = true;
    a.wait_forever = true;
    SimEvent e;
    e.time = now_;
    e.kind = EventKind::Wakeup;
    e.agent = a.label;
    e.where = Location::of_node(a.node);
    e.fields.emplace_back("cause", cause ? "visit:" + std::to_string(cause) : std::string("adversary"));
    push(std::move(e));
    a.prog->on_wakeup(*a.ctx);
}

std::vector<std::vector<int>> Kernel::groups() const {
    const int k = static_cast<int>(agents_.size());
    std::vector<Location> loc(k);
    for (int i = 0; i < k; ++i) loc[i] = location_of(agents_[i]);
    std::vector<int> group_of(k, -1);
    std::vector<std::vector<int>> out;
    for (int i = 0; i < k; ++i) {
        if (group_of[i] >= 0) continue;
        std::vector<int> g{i};
        for (int j = i + 1; j < k; ++j)
            if (group_of[j] < 0 && loc[i] == loc[j]) {
                group_of[j] = static_cast<int>(out.size());
                g.push_back(j);
            }
        group_of[i] = static_cast<int>(out.size());
        out.push_back(std::move(g));
    }
    return out;
}

void Kernel::do_meetings() {
    for (auto& grp : groups()) {
        if (grp.size() < 2) continue;
        bool fresh = false;
        for (std::size_t x = 0; x < grp.size() && !fresh; ++x)
            for (std::size_t y = x + 1; y < grp.size(); ++y)
                if (!contact(grp[x], grp[y])) {
                    fresh = true;
                    break;
                }
        if (!fresh) continue;
        Label visitor = 0;
        for (int i : grp)
            if (agents_[i].status == Status::Active) {
                visitor = agents_[i].label;
                break;
            }
        if (visitor == 0) continue;  // nobody awake to notice
        for (int i : grp)
            if (agents_[i].status == Status::Dormant) do_wake(agents_[i], visitor);

        const Location where = location_of(agents_[grp[0]]);
        const bool mid = !where.at_node();
        SimEvent e;
        e.time = now_;
        e.kind = EventKind::Meet;
        e.where = where;
        std::string crashed, declared;
        for (int i : grp) {
            e.agents.push_back(agents_[i].label);
            if (agents_[i].status == Status::Crashed) crashed += (crashed.empty() ? "" : ",") + std::to_string(agents_[i].label);
            if (agents_[i].status == Status::Terminated)
                declared += (declared.empty() ? "" : ",") + std::to_string(agents_[i].label);
        }
        if (!crashed.empty()) e.fields.emplace_back("crashed", crashed);
        if (!declared.empty()) e.fields.emplace_back("declared", declared);
        push(std::move(e));

        // all snapshots first, so that the exchange does not depend on order
        std::vector<std::shared_ptr<const AgentMemory>> mem;
        for (int i : grp) mem.push_back(memory_of(agents_[i]));
        for (std::size_t x = 0; x < grp.size(); ++x) {
            Agent& a = agents_[grp[x]];
            if (a.status != Status::Active) continue;
            std::vector<Peer> peers;
            for (std::size_t y = 0; y < grp.size(); ++y)
                if (y != x) peers.push_back(peer_view(a, agents_[grp[y]], mid, mem[y]));
            const bool interrupt = a.prog->on_meeting(*a.ctx, peers);
            if (interrupt && !a.moving) a.pending = true;
        }
        for (std::size_t x = 0; x < grp.size(); ++x) {
            Agent& a = agents_[grp[x]];
            const auto& c = a.spec->crash;
            if (!c || c->when != CrashSpec::When::AfterMeet || a.crash_at) continue;
            if (a.status != Status::Active) continue;
            for (int j : grp)
                if (agents_[j].label == c->other) a.crash_at = now_ + c->delay;
        }
    }
}

void Kernel::do_decisions() {
    std::vector<NodeId> declares;
    for (int round = 0;; ++round) {
        if (round > 1000) throw std::logic_error("agent program keeps re-deciding at one instant");
        bool any = false;
        for (Agent& a : agents_) {
            if (a.status != Status::Active || a.moving) continue;
            const bool expired = !a.wait_forever && a.wait_until == now_;
            if (!a.pending && !expired) continue;
            any = true;
            a.pending = false;
            NodeView view;
            view.degree = g_.degree(a.node);
            view.entry = a.entry;
            for (const Agent& b : agents_) {
                if (&b == &a) continue;
                const Location lb = location_of(b);
                if (lb.at_node() && lb.node == a.node) view.present.push_back(peer_view(a, b, false, memory_of(b)));
            }
            const Decision d = a.prog->decide(*a.ctx, view);
            switch (d.kind) {
                case Decision::Kind::Move: {
                    const PortTarget t = g_.traverse(a.node, d.port);
                    a.moving = true;
                    a.to = t.node;
                    a.exit = d.port;
                    a.entry = t.entry;
                    a.depart = now_;
                    a.arrive = now_ + a.inv_speed;
                    a.wait_forever = true;
                    ++traversals_;
                    SimEvent e;
                    e.time = now_;
                    e.kind = EventKind::Depart;
                    e.agent = a.label;
                    e.where = Location::of_node(a.node);
                    e.fields.emplace_back("port", std::to_string(d.port));
                    push(std::move(e));
                    a.prog->on_depart(*a.ctx, d.port);
                    break;
                }
                case Decision::Kind::Wait: {
                    const Rational until = a.wake_time + d.until;
                    if (until < now_) throw std::logic_error("agent " + std::to_string(a.label) + " waits into the past");
                    if (until == now_) {
                        a.pending = true;
                    } else {
                        a.wait_forever = false;
                        a.wait_until = until;
                    }
                    break;
                }
                case Decision::Kind::WaitForever:
                    a.wait_forever = true;
                    break;
                case Decision::Kind::Declare:
                    a.wait_forever = true;
                    declares.push_back(a.node);
                    break;
            }
            if (a.prog->take_announcement()) {
                const auto mem = memory_of(a);
                for (Agent& b : agents_) {
                    if (&b == &a || b.status != Status::Active) continue;
                    const Location lb = location_of(b);
                    if (!lb.at_node() || lb.node != a.node) continue;
                    if (b.prog->on_meeting(*b.ctx, {peer_view(b, a, false, mem)}) && !b.moving) b.pending = true;
                }
            }
        }
        if (!any) break;
        if (!declares.empty()) break;
    }
    std::sort(declares.begin(), declares.end());
    declares.erase(std::unique(declares.begin(), declares.end()), declares.end());
    for (NodeId x : declares) {
        SimEvent e;
        e.time = now_;
        e.kind = EventKind::Declare;
        e.where = Location::of_node(x);
        std::string present;
        for (Agent& a : agents_) {
            const Location here = location_of(a);  // an agent leaving right now is still at x
            if (!here.at_node() || here.node != x) continue;
            present += (present.empty() ? "" : ",") + std::to_string(a.label);
            if (a.status != Status::Active) continue;
            if (a.moving) {  // was about to leave; the declaration keeps it here
                a.moving = false;
                --traversals_;
                buffer_.erase(std::remove_if(buffer_.begin(), buffer_.end(),
                                             [&](const SimEvent& ev) {
                                                 return ev.kind == EventKind::Depart && ev.agent == a.label;
                                             }),
                              buffer_.end());
            }
            a.status = Status::Terminated;
            a.prog->on_declare(*a.ctx);
            e.agents.push_back(a.label);
        }
        e.fields.emplace_back("present", present);
        push(std::move(e));
    }
}

void Kernel::recompute_contacts() {
    std::fill(contact_.begin(), contact_.end(), 0);
    for (auto& grp : groups()) {
        for (std::size_t x = 0; x < grp.size(); ++x)
            for (std::size_t y = x + 1; y < grp.size(); ++y) {
                const Agent& a = agents_[grp[x]];
                const Agent& b = agents_[grp[y]];
                bool together = false;
                if (stationary(a) && stationary(b)) {
                    together = true;
                } else if (!stationary(a) && !stationary(b)) {
                    together = a.node == b.node && a.to == b.to && a.speed == b.speed && a.depart == b.depart;
                }
                contact(grp[x], grp[y]) = contact(grp[y], grp[x]) = together;
            }
    }
}

void Kernel::process() {
    // 1. crashes
    for (Agent& a : agents_) {
        if (a.crash_at && !a.crash_done && *a.crash_at == now_) {
            if (a.status == Status::Dormant || a.status == Status::Active) {
                do_crash(a);
            } else {
                a.crash_done = true;  // already terminated: suppressed
            }
        }
    }
    // 2. adversary wakeups
    for (Agent& a : agents_)
        if (a.status == Status::Dormant && !a.woken && a.spec->wake && *a.spec->wake == now_) do_wake(a, 0);
    // 3. arrivals
    for (Agent& a : agents_) {
        if (a.status == Status::Active && a.moving && a.arrive == now_) {
            a.moving = false;
            a.node = a.to;
            a.pending = true;
            SimEvent e;
            e.time = now_;
            e.kind = EventKind::Arrive;
            e.agent = a.label;
            e.where = Location::of_node(a.node);
            e.fields.emplace_back("port", std::to_string(a.entry));
            push(std::move(e));
            a.prog->on_arrival(*a.ctx, a.entry, g_.degree(a.node));
        }
    }
    // 4. meetings, 5. decisions
    do_meetings();
    do_decisions();
    recompute_contacts();
    flush();
}

RunResult Kernel::go() {
    RunResult r;
    auto finish = [&](RunResult::Status st, const std::string& reason) {
        r.status = st;
        r.reason = reason;
        r.end_time = now_;
        r.steps = steps_;
        r.traversals = traversals_;
        SimEvent e;
        e.time = now_;
        e.kind = EventKind::End;
        e.fields.emplace_back("status", status_name(st));
        if (!reason.empty()) e.fields.emplace_back("reason", reason);
        for (const auto& kv : opt_.provenance) e.fields.push_back(kv);
        sink_.emit(e);
        return r;
    };
    for (;;) {
        bool all_done = true;
        for (const Agent& a : agents_)
            if (a.status == Status::Active || a.status == Status::Dormant) all_done = false;
        if (all_done && steps_ > 0) return finish(RunResult::Status::Complete, "");
        const auto t = next_time();
        if (!t) return finish(RunResult::Status::Quiescent, "no pending event");
        if (horizon_ && *t > *horizon_) {
            now_ = *horizon_;
            return finish(RunResult::Status::Truncated, "horizon");
        }
        if (steps_ >= opt_.max_events) return finish(RunResult::Status::Truncated, "event cap");
        now_ = *t;
        ++steps_;
        process();
    }
}

}  // namespace

RunResult run(const Scenario& s, const ProgramFactory& factory, TraceSink& sink, const RunOptions& opt) {
    if (!s.graph) throw std::invalid_argument("scenario without graph");
    Kernel k(s, factory, sink, opt);
    return k.go();
}

}  // namespace gather
