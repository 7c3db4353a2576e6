#include "gather/kernel.hpp"

#include <sstream>
#include <stdexcept>

namespace gather {

namespace {

constexpr const char* kEventNames[] = {"crash", "wakeup", "arrive", "meet", "depart", "transition", "declare", "end"};

std::string join_labels(const std::vector<Label>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

// Field values are free text; spaces, newlines and '%' are percent-encoded
// so every event stays one whitespace-separated line.
std::string encode_value(const std::string& v) {
    std::string out;
    for (char c : v) {
        if (c == '%') out += "%25";
        else if (c == ' ') out += "%20";
        else if (c == '\t') out += "%09";
        else if (c == '\n') out += "%0A";
        else out += c;
    }
    return out;
}

std::string decode_value(const std::string& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != '%') {
            out += v[i];
            continue;
        }
        if (i + 2 >= v.size()) throw std::invalid_argument("truncated escape in '" + v + "'");
        out += static_cast<char>(std::stoi(v.substr(i + 1, 2), nullptr, 16));
        i += 2;
    }
    return out;
}

std::vector<Label> split_labels(const std::string& s) {
    std::vector<Label> out;
    std::size_t pos = 0;
    while (pos <= s.size() && !s.empty()) {
        auto comma = s.find(',', pos);
        const std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(std::stoull(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

Location parse_location(const std::string& s) {
    if (s.size() >= 2 && s[0] == 'n') return Location::of_node(std::stoi(s.substr(1)));
    // e<u>-<v>@<offset>
    auto dash = s.find('-');
    auto at = s.find('@');
    if (s.empty() || s[0] != 'e' || dash == std::string::npos || at == std::string::npos)
        throw std::invalid_argument("bad location '" + s + "'");
    Location loc;
    loc.edge.u = std::stoi(s.substr(1, dash - 1));
    loc.edge.v = std::stoi(s.substr(dash + 1, at - dash - 1));
    loc.edge.offset = parse_rational(s.substr(at + 1));
    return loc;
}

}  // namespace

const char* event_name(EventKind k) { return kEventNames[static_cast<int>(k)]; }

EventKind parse_event_kind(const std::string& s) {
    for (int i = 0; i < 8; ++i)
        if (s == kEventNames[i]) return static_cast<EventKind>(i);
    throw std::invalid_argument("unknown event kind '" + s + "'");
}

int event_rank(EventKind k) { return static_cast<int>(k); }

const char* status_name(RunResult::Status s) {
    switch (s) {
        case RunResult::Status::Complete: return "complete";
        case RunResult::Status::Truncated: return "truncated";
        case RunResult::Status::Quiescent: return "quiescent";
    }
    return "?";
}

const std::string* SimEvent::field(const std::string& key) const {
    for (const auto& [k, v] : fields)
        if (k == key) return &v;
    return nullptr;
}

std::string format_event(const SimEvent& e) {
    std::string out = "t=" + to_string(e.time) + " kind=" + event_name(e.kind);
    if (e.agent != 0) out += " agent=" + std::to_string(e.agent);
    if (e.where) out += " at=" + e.where->str();
    if (!e.agents.empty()) out += " agents=" + join_labels(e.agents);
    for (const auto& [k, v] : e.fields) out += " " + k + "=" + encode_value(v);
    return out;
}

SimEvent parse_event(const std::string& line) {
    SimEvent e;
    std::istringstream in(line);
    std::string tok;
    bool have_t = false, have_kind = false;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad trace token '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "t") {
            e.time = parse_rational(val);
            have_t = true;
        } else if (key == "kind") {
            e.kind = parse_event_kind(val);
            have_kind = true;
        } else if (key == "agent") {
            e.agent = std::stoull(val);
        } else if (key == "at") {
            e.where = parse_location(val);
        } else if (key == "agents") {
            e.agents = split_labels(val);
        } else {
            e.fields.emplace_back(key, decode_value(val));
        }
    }
    if (!have_t || !have_kind) throw std::invalid_argument("trace line lacks t= or kind=");
    return e;
}

bool Trace::truncated() const {
    if (events.empty() || events.back().kind != EventKind::End) return true;
    const std::string* st = events.back().field("status");
    return st && *st == "truncated";
}

std::string write_trace(const Trace& t) {
    std::string out;
    for (const auto& [k, v] : t.header) out += "# " + k + "=" + v + "\n";
    for (const auto& e : t.events) out += format_event(e) + "\n";
    return out;
}

Trace parse_trace(const std::string& text) {
    Trace t;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq != std::string::npos && line.size() > 2) t.header.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
            continue;
        }
        try {
            t.events.push_back(parse_event(line));
        } catch (const std::exception& ex) {
            throw std::runtime_error("trace line " + std::to_string(n) + ": " + ex.what());
        }
    }
    return t;
}

}  // namespace gather
