#include "gather/meeting_policy.hpp"

#include <algorithm>

namespace gather {

Rational MeetingPolicy::label_scale(Label label) {
    Rational g(BigInt(static_cast<unsigned long>(label)) + 2, BigInt(static_cast<unsigned long>(label)) + 1);
    g.canonicalize();
    return g;
}

Rational MeetingPolicy::wait_length(Label label, int burst) {
    BigInt four;
    mpz_ui_pow_ui(four.get_mpz_t(), 4, static_cast<unsigned long>(burst));
    return label_scale(label) * Rational(four);
}

void MeetingPolicy::start_burst() {
    ++burst_;
    const int s = std::min(burst_ + 1, table_->n_max);
    walker_ = UesWalker(&table_->ues_for(s));
    back_.clear();
}

MeetingAction MeetingPolicy::next_action(int degree, Port entry_port) {
    if (last_ == Last::Forward) {
        walker_.advance(entry_port);
        back_.push_back(entry_port);
    }
    if (last_ == Last::Wait) start_burst();
    if (!walker_.done()) {
        last_ = Last::Forward;
        ++traversals_;
        return MeetingAction::move(walker_.next_port(degree));
    }
    if (!back_.empty()) {
        const Port p = back_.back();
        back_.pop_back();
        last_ = Last::Backward;
        ++traversals_;
        return MeetingAction::move(p);
    }
    last_ = Last::Wait;
    return MeetingAction::wait(wait_length(label_, burst_));
}

}  // namespace gather
