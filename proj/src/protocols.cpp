#include "gather/protocols.hpp"

#include "gather/bounds.hpp"
#include "gather/meeting_policy.hpp"
#include "gather/procedures.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace gather {

const char* role_name(Role r) {
    switch (r) {
        case Role::Cruiser: return "cruiser";
        case Role::Explorer: return "explorer";
        case Role::Token: return "token";
        case Role::Finder: return "finder";
        case Role::Recycled: return "recycled-explorer";
        case Role::Gatherer: return "gatherer";
    }
    return "?";
}

int label_length(Label l) {
    int bits = 0;
    while (l) {
        ++bits;
        l >>= 1;
    }
    return std::max(bits, 1);
}

BigInt phase_budget(FaultModel f, const PolyTable& table, int phase) {
    const BigInt pi = table.pi(table.n_max, phase);
    return f == FaultModel::Motion ? BigInt(2 * pi) : BigInt(12 * pi * pi);
}

GatherPlan compute_plan(FaultModel f, const AgentMemory& mem, const PolyTable& table) {
    if (mem.records.empty()) throw std::logic_error("plan: empty record set");
    GatherPlan plan;
    bool have_m = false;
    bool first = true;
    for (const auto& [label, rec] : mem.records) {
        plan.sigma.push_back(label);
        plan.lambda = std::max(plan.lambda, label_length(label));
        if (first) {
            plan.kappa = rec.speed;
            plan.epsilon = rec.speed;
            plan.delta_star = rec.speed;
            first = false;
        }
        plan.kappa = std::max(plan.kappa, rec.speed);
        plan.epsilon = std::min(plan.epsilon, rec.speed);
        plan.delta_star = std::min(plan.delta_star, rec.speed);
        if (rec.lowest_speed > 0) {
            plan.epsilon = std::min(plan.epsilon, rec.lowest_speed);
            plan.delta_star = std::min(plan.delta_star, rec.lowest_speed);
        }
        if (rec.delta) plan.delta_star = std::min(plan.delta_star, *rec.delta);
        if (rec.m) {
            BigInt candidate = *rec.m;
            if (f == FaultModel::Motion) candidate = std::max(candidate, bounds::nu_motion(table, *rec.m));
            if (!have_m || candidate > plan.mu_bound) plan.mu_bound = candidate;
            have_m = true;
        }
    }
    if (!have_m) throw std::logic_error("plan: no adopted upper bound m in memory (gatherer invariant violated)");
    plan.target = plan.sigma.front();
    if (f == FaultModel::Motion) {
        plan.nu_star = bounds::nu_motion(table, plan.mu_bound);
        plan.bound = bounds::phi_motion(table, plan.nu_star, plan.lambda, plan.delta_star);
        plan.final_wait = bounds::final_wait_motion(plan.bound, plan.kappa, plan.epsilon);
    } else {
        plan.nu_star = bounds::nu_total(table, plan.mu_bound);
        plan.bound = bounds::psi_total(table, plan.nu_star, plan.lambda, plan.delta_star);
        plan.final_wait = bounds::final_wait_total(plan.bound, plan.kappa, plan.delta_star);
    }
    return plan;
}

namespace {

using Payload = std::vector<std::pair<std::string, std::string>>;

std::string str(const BigInt& v) { return v.get_str(); }
std::string str(const Rational& v) { return to_string(v); }

// ---------------------------------------------------------------------------
// The gathering agent: one state machine for both fault models.
// ---------------------------------------------------------------------------
class GatheringAgent final : public AgentProgram {
public:
    GatheringAgent(const AgentSpec& spec, FaultModel f, const PolyTable* table) : f_(f), table_(table) {
        mem_.label = spec.label;
        mem_.speed = spec.speed;
        AgentRecord self;
        self.label = spec.label;
        self.speed = spec.speed;
        self.lowest_speed = spec.speed;
        mem_.records.emplace(spec.label, std::move(self));
    }

    void on_wakeup(AgentContext&) override {
        policy_ = MeetingPolicy(mem_.label, table_);
        touch();
    }

    void on_arrival(AgentContext&, Port entry, int degree) override {
        moving_ = false;
        mem_.moving = false;
        const PortStep st{exit_, entry};
        for (auto& [label, rec] : mem_.records) rec.route.moved(st);
        degree_ = degree;
        entry_ = entry;
        switch (owner_) {
            case Owner::Esst:
                if (esst_) {
                    esst_->arrived(entry, degree);
                    sync_report();
                }
                break;
            case Owner::Finder:
                finder_walk_.advance(entry);
                break;
            case Owner::RStar:
                if (rstar_) rstar_->arrived(entry, degree);
                break;
            default:
                break;
        }
        owner_ = Owner::None;
        touch();
    }

    bool on_meeting(AgentContext& ctx, const std::vector<Peer>& peers) override {
        for (const auto& p : peers)
            if (p.declared && !p.mid_edge) declare_ = true;
        merge(peers);
        switch (mem_.role) {
            case Role::Cruiser: cruiser_meeting(ctx, peers); break;
            case Role::Token: token_meeting(ctx, peers); break;
            case Role::Explorer:
            case Role::Recycled:
                if (esst_ && started_ && moving_) {
                    bool tok = false, crashed = false;
                    for (const auto& p : peers) {
                        if (is_token(p)) tok = true;
                        if (f_ == FaultModel::Total && p.crashed) crashed = true;
                    }
                    esst_->sighted_mid_edge(tok, crashed);
                }
                break;
            case Role::Finder:
                for (const auto& p : peers)
                    if (p.crashed && p.memory && p.memory->label == mem_.culprit) culprit_seen_ = true;
                break;
            case Role::Gatherer:
                break;
        }
        touch();
        return true;
    }

    Decision decide(AgentContext& ctx, const NodeView& view) override {
        degree_ = view.degree;
        for (const auto& p : view.present)
            if (p.declared) declare_ = true;
        Decision d = declare_ ? Decision::declare() : step(ctx, view);
        touch();
        return d;
    }

    void on_declare(AgentContext&) override {
        mem_.declared = true;
        touch();
    }

    bool take_announcement() override { return std::exchange(announce_, false); }

    std::shared_ptr<const AgentMemory> snapshot() const override {
        if (!snap_) snap_ = std::make_shared<const AgentMemory>(mem_);
        return snap_;
    }

private:
    enum class Owner { None, Policy, Esst, Finder, RStar, Travel, Plain };
    enum class Sub { RStar, Red, Travel, Final };

    struct Tracked {
        Label label = 0;
        Rational beta;
        Rational deadline;   // local time
        int seq = 0;
        bool done = false, timed_out = false;
        std::optional<BigInt> m;
    };

    void touch() { snap_.reset(); }

    std::string state() const {
        std::string s = role_name(mem_.role);
        if (!mem_.phase.empty()) s += "/" + mem_.phase;
        return s;
    }

    void set_state(AgentContext& ctx, Role r, const std::string& phase, Payload payload = {}) {
        const std::string from = state();
        mem_.role = r;
        mem_.phase = phase;
        ctx.transition(from, state(), std::move(payload));
    }

    Decision go(Port p, Owner owner) {
        moving_ = true;
        exit_ = p;
        owner_ = owner;
        mem_.moving = true;
        mem_.exit_port = p;
        return Decision::move(p);
    }

    bool is_token(const Peer& p) const {
        if (!p.memory || p.memory->label != mem_.token) return false;
        return f_ == FaultModel::Motion || !p.crashed;
    }

    AgentRecord& self() { return mem_.records.at(mem_.label); }

    // ---- record exchange ---------------------------------------------------

    Route translate(const Route& r, const Peer& p) const {
        if (!p.mid_edge || p.same_origin) return r;
        // The peer's anchor is the far endpoint of my edge: prefix my step.
        Route out = r;
        out.prepend(PortStep{exit_, p.memory->exit_port});
        return out;
    }

    void absorb(const AgentRecord& rec, const Peer& p) {
        if (rec.label == mem_.label) return;
        auto it = mem_.records.find(rec.label);
        if (it == mem_.records.end()) {
            AgentRecord copy = rec;
            copy.route = translate(rec.route, p);
            mem_.records.emplace(rec.label, std::move(copy));
        } else {
            AgentRecord& mine = it->second;
            if (!mine.m && rec.m) mine.m = rec.m;
            if (!mine.delta && rec.delta) mine.delta = rec.delta;
            if (rec.lowest_speed > 0 && (mine.lowest_speed == 0 || rec.lowest_speed < mine.lowest_speed))
                mine.lowest_speed = rec.lowest_speed;
        }
        AgentRecord& me = self();
        if (rec.speed < me.lowest_speed) me.lowest_speed = rec.speed;
    }

    void merge(const std::vector<Peer>& peers) {
        const bool bag_open = mem_.role == Role::Gatherer && sub_ == Sub::Red && !frozen_;
        for (const auto& p : peers) {
            if (!p.memory) continue;
            if (f_ == FaultModel::Motion) {
                for (const auto& [label, rec] : p.memory->records) absorb(rec, p);
            } else if (!p.crashed && !frozen_) {
                absorb(p.memory->self(), p);
                if (bag_open)
                    for (const auto& [label, rec] : p.memory->records) absorb(rec, p);
            }
        }
    }

    // ---- transitions ------------------------------------------------------

    void become_cruiser(AgentContext& ctx) {
        policy_ = MeetingPolicy(mem_.label, table_);
        wait_end_.reset();
        esst_.reset();
        explorers_.clear();
        started_ = false;
        set_state(ctx, Role::Cruiser, "");
    }

    void become_token(AgentContext& ctx, const std::vector<const Peer*>& cruisers) {
        const Rational now = ctx.local_time();
        explorers_.clear();
        for (const Peer* c : cruisers) {
            Tracked t;
            t.label = c->memory->label;
            t.beta = c->memory->speed;
            t.deadline = now + 1 / mem_.speed + 2 / t.beta + Rational(phase_budget(f_, *table_, 3)) / t.beta;
            explorers_.push_back(t);
        }
        std::string labels;
        for (const auto& t : explorers_) labels += (labels.empty() ? "" : ",") + std::to_string(t.label);
        set_state(ctx, Role::Token, "", {{"explorers", labels}});
    }

    void become_explorer(AgentContext& ctx, const Peer& tok) {
        mem_.token = tok.memory->label;
        mem_.report_seq = 0;
        mem_.next_phase = 3;
        mem_.esst_done = false;
        started_ = false;
        go_back_ = false;
        token_deadline_.reset();
        if (tok.mid_edge && !tok.crashed) {
            // A live token finishes its traversal; meet it at that endpoint.
            go_back_ = !tok.same_origin;
            token_deadline_ = ctx.local_time() + 1 / tok.memory->speed;
        }
        esst_ = std::make_unique<Esst>(f_ == FaultModel::Motion ? Esst::Variant::Modified : Esst::Variant::Star, table_);
        set_state(ctx, Role::Explorer, "", {{"token", std::to_string(mem_.token)}});
    }

    void become_finder(AgentContext& ctx, Label culprit) {
        mem_.culprit = culprit;
        finder_round_ = 1;
        finder_walk_ = UesWalker(&table_->ues_for(1));
        culprit_seen_ = false;
        set_state(ctx, Role::Finder, "", {{"culprit", std::to_string(culprit)}});
    }

    void become_gatherer(AgentContext& ctx, const BigInt& m, Payload extra = {}) {
        mem_.m = m;
        self().m = m;
        sub_ = Sub::RStar;
        rstar_ = std::make_unique<RStarWalk>(&table_->ues_for(m));
        esst_.reset();
        started_ = false;
        Payload payload{{"m", str(m)}};
        for (auto& kv : extra) payload.push_back(std::move(kv));
        set_state(ctx, Role::Gatherer, "rstar", std::move(payload));
    }

    // Explorer progress into memory; returns true when something changed.
    bool sync_report() {
        bool changed = false;
        if (mem_.report_seq != esst_->reports() || mem_.next_phase != esst_->next_phase()) {
            mem_.report_seq = esst_->reports();
            mem_.next_phase = esst_->next_phase();
            changed = true;
        }
        if (esst_->finished() && !mem_.esst_done) {
            mem_.esst_done = true;
            mem_.esst_steps = BigInt(static_cast<unsigned long>(esst_->steps()));
            mem_.m = mem_.esst_steps;
            changed = true;
        }
        return changed;
    }

    // ---- meetings by role ---------------------------------------------------

    void cruiser_meeting(AgentContext& ctx, const std::vector<Peer>& peers) {
        const Peer* gatherer = nullptr;
        const Peer* crashed_token = nullptr;
        const Peer* finder = nullptr;
        std::vector<const Peer*> cruisers;
        auto smaller = [](const Peer* cur, const Peer& p) { return !cur || p.memory->label < cur->memory->label; };
        for (const auto& p : peers) {
            if (!p.memory) continue;
            if (f_ == FaultModel::Total && p.crashed) continue;
            switch (p.memory->role) {
                case Role::Gatherer:
                    if (p.memory->m && smaller(gatherer, p)) gatherer = &p;
                    break;
                case Role::Cruiser:
                    cruisers.push_back(&p);
                    break;
                case Role::Token:
                    if (f_ == FaultModel::Motion && p.crashed && smaller(crashed_token, p)) crashed_token = &p;
                    break;
                case Role::Finder:
                case Role::Recycled:
                    if (f_ == FaultModel::Motion && smaller(finder, p)) finder = &p;
                    break;
                default:
                    break;
            }
        }
        if (gatherer) {
            become_gatherer(ctx, *gatherer->memory->m, {{"from", std::to_string(gatherer->memory->label)}});
        } else if (!cruisers.empty()) {
            const Peer* least = nullptr;
            for (const Peer* c : cruisers)
                if (smaller(least, *c)) least = c;
            if (mem_.label < least->memory->label) {
                become_token(ctx, cruisers);
            } else {
                become_explorer(ctx, *least);
            }
        } else if (crashed_token) {
            become_explorer(ctx, *crashed_token);
        } else if (finder) {
            become_finder(ctx, finder->memory->culprit);
        }
    }

    void token_meeting(AgentContext& ctx, const std::vector<Peer>& peers) {
        for (const auto& p : peers) {
            if (!p.memory || (f_ == FaultModel::Total && p.crashed)) continue;
            for (auto& t : explorers_) {
                if (t.label != p.memory->label || t.done || t.timed_out) continue;
                const AgentMemory& x = *p.memory;
                if (x.esst_done && x.token == mem_.label && x.m) {
                    t.done = true;
                    t.m = x.m;
                } else if (x.token == mem_.label && x.report_seq > t.seq) {
                    t.seq = x.report_seq;
                    t.deadline = ctx.local_time() + Rational(phase_budget(f_, *table_, x.next_phase)) / t.beta;
                }
            }
        }
    }

    // ---- decisions by role --------------------------------------------------

    Decision step(AgentContext& ctx, const NodeView& view) {
        switch (mem_.role) {
            case Role::Cruiser: return cruiser_step(ctx);
            case Role::Token: return token_step(ctx);
            case Role::Explorer:
            case Role::Recycled: return explorer_step(ctx, view);
            case Role::Finder: return finder_step(ctx, view);
            case Role::Gatherer: return gatherer_step(ctx);
        }
        return Decision::forever();
    }

    Decision meeting_step(AgentContext& ctx, MeetingPolicy& policy, const std::optional<Rational>& cap) {
        const Rational now = ctx.local_time();
        if (wait_end_ && now < *wait_end_) return Decision::wait_until(*wait_end_);
        wait_end_.reset();
        const MeetingAction a = policy.next_action(degree_, entry_ < 0 ? 0 : entry_);
        if (!a.is_wait()) return go(a.port, Owner::Policy);
        Rational end = now + a.duration;
        if (cap && *cap < end) end = *cap;
        wait_end_ = end;
        return Decision::wait_until(end);
    }

    Decision cruiser_step(AgentContext& ctx) { return meeting_step(ctx, policy_, std::nullopt); }

    Decision token_step(AgentContext& ctx) {
        const Rational now = ctx.local_time();
        std::optional<Rational> next;
        for (auto& t : explorers_) {
            if (t.done || t.timed_out) continue;
            if (now >= t.deadline) {
                t.timed_out = true;
                continue;
            }
            if (!next || t.deadline < *next) next = t.deadline;
        }
        if (next) return Decision::wait_until(*next);

        std::optional<BigInt> m;
        Label culprit = 0;
        std::string timed_out;
        for (const auto& t : explorers_) {
            if (t.m && (!m || *t.m < *m)) m = t.m;
            if (t.timed_out) {
                if (!culprit || t.label < culprit) culprit = t.label;
                timed_out += (timed_out.empty() ? "" : ",") + std::to_string(t.label);
            }
        }
        if (m) {
            Payload extra;
            if (!timed_out.empty()) extra.emplace_back("timed_out", timed_out);
            become_gatherer(ctx, *m, std::move(extra));
            return gatherer_step(ctx);
        }
        if (f_ == FaultModel::Motion) {
            become_finder(ctx, culprit);
            return finder_step_walk();
        }
        become_cruiser(ctx);
        return cruiser_step(ctx);
    }

    Decision explorer_step(AgentContext& ctx, const NodeView& view) {
        bool token_here = false, crashed_here = false;
        for (const auto& p : view.present) {
            if (is_token(p)) token_here = true;
            if (f_ == FaultModel::Total && p.crashed) crashed_here = true;
        }
        if (!started_) {
            if (go_back_) {
                go_back_ = false;
                return go(entry_, Owner::Plain);
            }
            if (token_deadline_ && !token_here) {
                if (ctx.local_time() < *token_deadline_) return Decision::wait_until(*token_deadline_);
                // the token crashed inside the edge
                if (f_ == FaultModel::Total) {
                    become_cruiser(ctx);
                    return cruiser_step(ctx);
                }
            }
            token_deadline_.reset();
            started_ = true;
        }
        const Esst::Action a = esst_->next(degree_, token_here, f_ == FaultModel::Total && crashed_here);
        if (sync_report()) announce_ = true;
        switch (a.outcome) {
            case Esst::Outcome::Running:
                return go(a.port, Owner::Esst);
            case Esst::Outcome::Finished: {
                announce_ = true;
                const BigInt m = mem_.esst_steps;
                become_gatherer(ctx, m, {{"esst_steps", str(m)}});
                return gatherer_step(ctx);
            }
            case Esst::Outcome::TokenLost:
                become_cruiser(ctx);
                return cruiser_step(ctx);
        }
        return Decision::forever();
    }

    Decision finder_step(AgentContext& ctx, const NodeView& view) {
        for (const auto& p : view.present)
            if (p.crashed && p.memory && p.memory->label == mem_.culprit) culprit_seen_ = true;
        if (culprit_seen_) {
            mem_.token = mem_.culprit;
            mem_.report_seq = 0;
            mem_.next_phase = 3;
            mem_.esst_done = false;
            esst_ = std::make_unique<Esst>(Esst::Variant::Plain, table_);
            started_ = true;
            set_state(ctx, Role::Recycled, "", {{"token", std::to_string(mem_.culprit)}});
            return explorer_step(ctx, view);
        }
        return finder_step_walk();
    }

    Decision finder_step_walk() {
        while (finder_walk_.done()) {
            ++finder_round_;
            finder_walk_ = UesWalker(&table_->ues_for(finder_round_));
        }
        return go(finder_walk_.next_port(degree_), Owner::Finder);
    }

    Decision gatherer_step(AgentContext& ctx) {
        const Rational now = ctx.local_time();
        if (sub_ == Sub::RStar) {
            if (auto p = rstar_->next(degree_)) return go(*p, Owner::RStar);
            const std::uint64_t c = std::max<std::uint64_t>(rstar_->traversals(), 1);
            const Rational gamma = mem_.speed / Rational(static_cast<unsigned long>(c));
            Rational delta = gamma;
            Rational aware_min = mem_.speed;
            int aware_len = 1;
            for (const auto& [label, rec] : mem_.records) {
                delta = std::min(delta, rec.speed);
                aware_min = std::min(aware_min, rec.speed);
                aware_len = std::max(aware_len, label_length(label));
            }
            self().delta = delta;
            const int len = label_length(mem_.label);
            const BigInt nu = f_ == FaultModel::Motion ? bounds::nu_motion(*table_, *mem_.m)
                                                       : bounds::nu_total(*table_, *mem_.m);
            const Rational tau = f_ == FaultModel::Motion ? bounds::red_period_motion(*table_, *mem_.m, len, delta)
                                                          : bounds::red_period_total(*table_, *mem_.m, len, delta);
            red_end_ = now + tau;
            red_policy_ = MeetingPolicy(mem_.label, table_);
            wait_end_.reset();
            sub_ = Sub::Red;
            set_state(ctx, Role::Gatherer, "red",
                      {{"c", std::to_string(c)},
                       {"gamma", str(gamma)},
                       {"delta", str(delta)},
                       {"nu", str(nu)},
                       {"tau", str(tau)},
                       {"aware_min_speed", str(aware_min)},
                       {"aware_max_label_len", std::to_string(aware_len)}});
        }
        if (sub_ == Sub::Red) {
            if (now < red_end_) return meeting_step(ctx, red_policy_, red_end_);
            plan_ = compute_plan(f_, mem_, *table_);
            frozen_ = true;
            sub_ = Sub::Travel;
            std::string sigma;
            for (Label l : plan_.sigma) sigma += (sigma.empty() ? "" : ",") + std::to_string(l);
            set_state(ctx, Role::Gatherer, "travel",
                      {{"target", std::to_string(plan_.target)},
                       {"sigma", sigma},
                       {f_ == FaultModel::Motion ? "phi" : "psi", str(plan_.bound)},
                       {"tau_prime", str(plan_.final_wait)},
                       {"nu_star", str(plan_.nu_star)},
                       {"delta_star", str(plan_.delta_star)},
                       {"kappa", str(plan_.kappa)},
                       {"mu", str(plan_.mu_bound)}});
        }
        if (sub_ == Sub::Travel) {
            const Route& route = mem_.records.at(plan_.target).route;
            if (!route.empty()) return go(route.next().exit, Owner::Travel);
            final_end_ = now + plan_.final_wait;
            sub_ = Sub::Final;
            set_state(ctx, Role::Gatherer, "final", {{"until_local", str(final_end_)}});
        }
        if (now >= final_end_) return Decision::declare();
        return Decision::wait_until(final_end_);
    }

    FaultModel f_;
    const PolyTable* table_;
    AgentMemory mem_;
    mutable std::shared_ptr<const AgentMemory> snap_;

    bool moving_ = false;
    Port exit_ = 0;
    Port entry_ = -1;
    int degree_ = 0;
    Owner owner_ = Owner::None;
    bool announce_ = false;
    bool declare_ = false;

    MeetingPolicy policy_;
    std::optional<Rational> wait_end_;

    std::vector<Tracked> explorers_;

    std::unique_ptr<Esst> esst_;
    bool started_ = false;
    bool go_back_ = false;
    std::optional<Rational> token_deadline_;

    int finder_round_ = 1;
    UesWalker finder_walk_;
    bool culprit_seen_ = false;

    Sub sub_ = Sub::RStar;
    std::unique_ptr<RStarWalk> rstar_;
    MeetingPolicy red_policy_;
    Rational red_end_, final_end_;
    GatherPlan plan_;
    bool frozen_ = false;
};

// ---------------------------------------------------------------------------
// Small programs for kernel tests.
// ---------------------------------------------------------------------------
class SimpleProgram : public AgentProgram {
public:
    explicit SimpleProgram(const AgentSpec& spec) {
        auto m = std::make_shared<AgentMemory>();
        m->label = spec.label;
        m->speed = spec.speed;
        AgentRecord self;
        self.label = spec.label;
        self.speed = spec.speed;
        self.lowest_speed = spec.speed;
        m->records.emplace(spec.label, self);
        mem_ = std::move(m);
    }
    std::shared_ptr<const AgentMemory> snapshot() const override { return mem_; }

private:
    std::shared_ptr<const AgentMemory> mem_;
};

class WaitForever final : public SimpleProgram {
public:
    using SimpleProgram::SimpleProgram;
    Decision decide(AgentContext&, const NodeView&) override { return Decision::forever(); }
};

class Scripted final : public SimpleProgram {
public:
    Scripted(const AgentSpec& spec, std::vector<Port> ports, Rational pause)
        : SimpleProgram(spec), ports_(std::move(ports)), pause_(std::move(pause)) {}

    Decision decide(AgentContext& ctx, const NodeView& view) override {
        if (next_ >= ports_.size()) return Decision::forever();
        if (pause_ > 0) {
            if (!resume_at_) resume_at_ = ctx.local_time() + pause_;
            if (ctx.local_time() < *resume_at_) return Decision::wait_until(*resume_at_);
            resume_at_.reset();
        }
        return Decision::move(ports_[next_++] % view.degree);
    }

private:
    std::vector<Port> ports_;
    Rational pause_;
    std::size_t next_ = 0;
    std::optional<Rational> resume_at_;
};

}  // namespace

ProgramFactory gathering_factory(const PolyTable* table) {
    return [table](const AgentSpec& spec, const Scenario& s) -> std::unique_ptr<AgentProgram> {
        return std::make_unique<GatheringAgent>(spec, s.protocol, table);
    };
}

ProgramFactory wait_forever_factory() {
    return [](const AgentSpec& spec, const Scenario&) -> std::unique_ptr<AgentProgram> {
        return std::make_unique<WaitForever>(spec);
    };
}

ProgramFactory port_zero_once_factory() { return scripted_factory({0}); }

ProgramFactory scripted_factory(std::vector<Port> ports, Rational pause) {
    return [ports, pause](const AgentSpec& spec, const Scenario&) -> std::unique_ptr<AgentProgram> {
        return std::make_unique<Scripted>(spec, ports, pause);
    };
}

}  // namespace gather
