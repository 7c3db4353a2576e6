#include "gather/procedures.hpp"

namespace gather {

// ---- Ball ---------------------------------------------------------------------

std::optional<Port> BallWalk::next(int degree) {
    switch (stage_) {
        case Stage::Start:
            dw_ = degree;
            p_ = 0;
            stage_ = Stage::AtW;
            [[fallthrough]];
        case Stage::AtW:
            if (p_ < dw_) return p_;
            stage_ = Stage::Done;
            return std::nullopt;
        case Stage::AtX:
            return r_ < dx_ ? r_ : e1_;
        case Stage::AtY:
            return e2_;
        case Stage::Done:
            break;
    }
    return std::nullopt;
}

void BallWalk::arrived(Port entry, int degree) {
    ++traversals_;
    switch (stage_) {
        case Stage::AtW:  // reached a neighbour x
            e1_ = entry;
            dx_ = degree;
            r_ = 0;
            stage_ = Stage::AtX;
            break;
        case Stage::AtX:
            if (r_ < dx_) {  // reached y
                e2_ = entry;
                stage_ = Stage::AtY;
            } else {         // back at w
                ++p_;
                stage_ = Stage::AtW;
            }
            break;
        case Stage::AtY:
            ++r_;
            stage_ = Stage::AtX;
            break;
        default:
            break;
    }
}

// ---- R* -------------------------------------------------------------------------

std::optional<Port> RStarWalk::next(int degree) {
    if (done_) return std::nullopt;
    if (!ball_.done()) {
        if (auto p = ball_.next(degree)) return p;
    }
    if (walker_.done()) {
        done_ = true;
        return std::nullopt;
    }
    r_step_pending_ = true;
    return walker_.next_port(degree);
}

void RStarWalk::arrived(Port entry, int degree) {
    ++traversals_;
    if (r_step_pending_) {
        walker_.advance(entry);
        r_step_pending_ = false;
        ball_ = BallWalk{};
    } else {
        ball_.arrived(entry, degree);
    }
}

// ---- ESST -------------------------------------------------------------------------

Esst::Action Esst::move(Port p, bool is_green) {
    pending_exit_ = p;
    pending_green_ = is_green;
    return {Outcome::Running, p};
}

void Esst::sighted_mid_edge(bool token, bool crashed) {
    mid_token_ = mid_token_ || token;
    mid_crashed_ = mid_crashed_ || crashed;
}

void Esst::arrived(Port entry, int degree) {
    const PortStep st{pending_exit_, entry};
    ++steps_;
    if (pending_green_) {
        ++green_steps_;
        ++phase_steps_;
    }
    last_was_green_ = pending_green_;
    to_base_.moved(st);
    switch (stage_) {
        case Stage::Trunc:
            walker_.advance(entry);
            trunc_.push_back(st);
            if (degree > phase_ - 1) clean_ = false;
            break;
        case Stage::TruncBack:
            --back_index_;
            break;
        case Stage::Excursion:
            walker_.advance(entry);
            exc_.push_back(st);
            break;
        case Stage::ExcBack:
            exc_.pop_back();
            break;
        case Stage::ToNext:
            ++j_;
            stage_ = Stage::ExcStart;
            break;
        case Stage::Return:
            if (to_base_.empty()) close_phase(completed_);
            break;
        case Stage::Blue:
            blue_trail_.push_back(st);
            break;
        case Stage::BlueBack:
            blue_trail_.pop_back();
            break;
        default:
            break;
    }
}

void Esst::close_phase(bool completed) {
    phase_log_.emplace_back(phase_, phase_steps_);
    phase_steps_ = 0;
    if (variant_ != Variant::Plain) ++reports_;
    if (completed) {
        stage_ = Stage::Finished;
    } else {
        phase_ += 3;
        stage_ = Stage::StartPhase;
    }
}

void Esst::abort_phase() {
    if (variant_ == Variant::Plain) {
        close_phase(false);
        return;
    }
    completed_ = false;
    stage_ = Stage::Return;
    if (to_base_.empty()) close_phase(false);
}

void Esst::complete_phase() {
    if (variant_ == Variant::Plain) {
        close_phase(true);
        return;
    }
    completed_ = true;
    stage_ = Stage::Return;
    if (to_base_.empty()) close_phase(true);
}

Esst::Action Esst::next(int degree, bool token_here, bool crashed_here) {
    if (lost_) return {Outcome::TokenLost, 0};
    bool mid_tok = mid_token_;
    const bool mid_cr = mid_crashed_;
    mid_token_ = mid_crashed_ = false;

    if (variant_ == Variant::Star && last_was_green_ && (mid_cr || crashed_here) && stage_ != Stage::Finished) {
        resume_ = stage_;
        saved_token_here_ = token_here;
        saved_mid_token_ = mid_tok;
        blue_trail_.clear();
        stage_ = Stage::Blue;
    }
    last_was_green_ = false;

    if (stage_ == Stage::Blue) {
        if (!to_base_.empty()) return move(to_base_.next().exit, false);
        if (!token_here) {
            lost_ = true;
            return {Outcome::TokenLost, 0};
        }
        stage_ = Stage::BlueBack;
    }
    if (stage_ == Stage::BlueBack) {
        if (!blue_trail_.empty()) return move(blue_trail_.back().entry, false);
        stage_ = resume_;
        token_here = saved_token_here_;
        mid_tok = saved_mid_token_;
    }
    return green(degree, token_here, mid_tok);
}

Esst::Action Esst::green(int degree, bool token_here, bool mid_tok) {
    // token_here is consumed once a sighting is recorded; a phase started in
    // this same call still needs to know whether the token is physically here.
    const bool token_present = token_here;
    auto record_code = [&](bool mid) {
        Code c;
        c.reserve(exc_.size() * 2 + 1);
        for (const auto& s : exc_) {
            c.push_back(s.exit);
            c.push_back(s.entry);
        }
        c.push_back(mid ? 1 : 0);
        codes_.insert(std::move(c));
        if (static_cast<int>(codes_.size()) * 3 >= phase_) {
            abort_phase();
        } else if (j_ + 1 > trunc_.size()) {
            complete_phase();  // stops where the last token sighting happened
        } else {
            stage_ = Stage::ExcBack;
        }
    };

    for (;;) {
        switch (stage_) {
            case Stage::StartPhase:
                walker_ = UesWalker(&table_->ues_for(2 * phase_));
                trunc_.clear();
                codes_.clear();
                exc_.clear();
                j_ = 0;
                clean_ = degree <= phase_ - 1;
                token_seen_ = token_present;
                to_base_ = Route{};
                completed_ = false;
                stage_ = Stage::Trunc;
                // Star phases start at the live token; its absence means it crashed.
                if (variant_ == Variant::Star && !token_present) {
                    lost_ = true;
                    return {Outcome::TokenLost, 0};
                }
                break;
            case Stage::Trunc:
                if (mid_tok || token_here) token_seen_ = true;
                mid_tok = false;
                if (!walker_.done()) return move(walker_.next_port(degree), true);
                if (!clean_ || !token_seen_) {
                    abort_phase();
                    break;
                }
                back_index_ = trunc_.size();
                stage_ = Stage::TruncBack;
                break;
            case Stage::TruncBack:
                if (back_index_ > 0) return move(trunc_[back_index_ - 1].entry, true);
                j_ = 0;
                stage_ = Stage::ExcStart;
                break;
            case Stage::ExcStart:
                walker_ = UesWalker(&table_->ues_for(phase_));
                exc_.clear();
                stage_ = Stage::Excursion;
                if (token_here) {
                    record_code(false);
                    token_here = false;
                }
                break;
            case Stage::Excursion:
                if (mid_tok || token_here) {
                    record_code(mid_tok);
                    mid_tok = token_here = false;
                    break;
                }
                if (!walker_.done()) return move(walker_.next_port(degree), true);
                abort_phase();  // no token seen from u_j
                break;
            case Stage::ExcBack:
                if (!exc_.empty()) return move(exc_.back().entry, true);
                stage_ = Stage::ToNext;
                break;
            case Stage::ToNext:
                return move(trunc_[j_].exit, true);
            case Stage::Return:
                if (!to_base_.empty()) return move(to_base_.next().exit, true);
                close_phase(completed_);
                break;
            case Stage::Finished:
                return {Outcome::Finished, 0};
            case Stage::Blue:
            case Stage::BlueBack:
                return {Outcome::Running, 0};  // unreachable: handled in next()
        }
    }
}

}  // namespace gather
