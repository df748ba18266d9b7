#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fairens/learners.hpp"
#include "fairens/mitigation/calibrated_odds.hpp"
#include "fairens/mitigation/lfr.hpp"
#include "fairens/mitigation/prejudice.hpp"

namespace fairens {

// ---------------------------------------------------------------------------
// mitigator configurations addressable from pipeline text

enum class MitigatorKind { Reweigh, Dir, Lfr, Pr, Ceo };

struct MitigatorSpec {
    MitigatorKind kind = MitigatorKind::Reweigh;
    double dir_level = 1.0;
    LfrParams lfr;
    PrejudiceParams pr;
    CeoCost ceo_cost = CeoCost::Weighted;

    bool is_pre() const {
        return kind == MitigatorKind::Reweigh || kind == MitigatorKind::Dir || kind == MitigatorKind::Lfr;
    }

    static MitigatorSpec reweigh() { return {MitigatorKind::Reweigh, 1.0, {}, {}, CeoCost::Weighted}; }
    static MitigatorSpec dir(double level) {
        MitigatorSpec m;
        m.kind = MitigatorKind::Dir;
        if (level < 0.0 || level > 1.0) throw ConfigError("DIR repair level outside [0,1]");
        m.dir_level = level;
        return m;
    }
    static MitigatorSpec lfr_spec(const LfrParams& p) {
        MitigatorSpec m;
        m.kind = MitigatorKind::Lfr;
        m.lfr = p;
        return m;
    }
    static MitigatorSpec pr_spec(const PrejudiceParams& p) {
        MitigatorSpec m;
        m.kind = MitigatorKind::Pr;
        m.pr = p;
        return m;
    }
    static MitigatorSpec ceo(CeoCost cost) {
        MitigatorSpec m;
        m.kind = MitigatorKind::Ceo;
        m.ceo_cost = cost;
        return m;
    }

    std::string text() const {
        switch (kind) {
            case MitigatorKind::Reweigh: return "Reweigh";
            case MitigatorKind::Dir: return "DIR(" + format_double(dir_level) + ")";
            case MitigatorKind::Lfr: {
                std::string s = "LFR(k=" + std::to_string(lfr.k) + ",Ax=" + format_double(lfr.ax) +
                                ",Ay=" + format_double(lfr.ay) + ",Az=" + format_double(lfr.az);
                LfrParams defaults;
                if (lfr.max_iters != defaults.max_iters) s += ",iters=" + std::to_string(lfr.max_iters);
                if (lfr.restarts != defaults.restarts) s += ",restarts=" + std::to_string(lfr.restarts);
                return s + ")";
            }
            case MitigatorKind::Pr: {
                std::string s = "PR(eta=" + format_double(pr.eta);
                PrejudiceParams defaults;
                if (pr.l2 != defaults.l2) s += ",l2=" + format_double(pr.l2);
                if (pr.max_iters != defaults.max_iters) s += ",iters=" + std::to_string(pr.max_iters);
                return s + ")";
            }
            case MitigatorKind::Ceo: return "CEO(cost=" + ceo_cost_name(ceo_cost) + ")";
        }
        throw ConfigError("unknown mitigator kind");
    }
};

// ---------------------------------------------------------------------------
// pipeline AST

struct PipelineExpr;
using ExprPtr = std::shared_ptr<const PipelineExpr>;

/// AST over the composition grammar: learners at the leaves, mitigation at
/// one point per path, ensembles anywhere above.
struct PipelineExpr {
    enum class Type { Learner, Pre, InEst, Post, Bag, Boost, Vote, Stack };

    Type type = Type::Learner;
    LearnerSpec learner;                // Learner
    MitigatorSpec mitigator;            // Pre / InEst / Post
    std::vector<ExprPtr> children;      // Pre/Post/Bag/Boost: 1; Vote/Stack: members; InEst: 0 (1 marks the infeasible wrap)
    ExprPtr stack_final;                // Stack only
    std::size_t n = 1;                  // Bag / Boost member count
    bool soft_vote = false;             // Vote
    bool passthrough = false;           // Stack
};

inline ExprPtr mk_learner(LearnerSpec spec) {
    auto e = std::make_shared<PipelineExpr>();
    e->type = PipelineExpr::Type::Learner;
    e->learner = std::move(spec);
    return e;
}

inline ExprPtr mk_pre(MitigatorSpec m, ExprPtr inner) {
    if (!m.is_pre()) throw ConfigError("Pr expects a pre-estimator mitigator, got " + m.text());
    auto e = std::make_shared<PipelineExpr>();
    e->type = PipelineExpr::Type::Pre;
    e->mitigator = std::move(m);
    e->children = {std::move(inner)};
    return e;
}

inline ExprPtr mk_in(MitigatorSpec m = MitigatorSpec::pr_spec({}), ExprPtr wrapped = nullptr) {
    if (m.kind != MitigatorKind::Pr) throw ConfigError("in-estimator slot expects PR, got " + m.text());
    auto e = std::make_shared<PipelineExpr>();
    e->type = PipelineExpr::Type::InEst;
    e->mitigator = std::move(m);
    if (wrapped) e->children = {std::move(wrapped)};
    return e;
}

inline ExprPtr mk_post(MitigatorSpec m, ExprPtr inner) {
    if (m.kind != MitigatorKind::Ceo) throw ConfigError("Post expects CEO, got " + m.text());
    auto e = std::make_shared<PipelineExpr>();
    e->type = PipelineExpr::Type::Post;
    e->mitigator = std::move(m);
    e->children = {std::move(inner)};
    return e;
}

inline ExprPtr mk_bag(ExprPtr inner, std::size_t n) {
    if (n < 1) throw ConfigError("Bag needs at least one member");
    auto e = std::make_shared<PipelineExpr>();
    e->type = PipelineExpr::Type::Bag;
    e->children = {std::move(inner)};
    e->n = n;
    return e;
}

inline ExprPtr mk_boost(ExprPtr inner, std::size_t n) {
    if (n < 1) throw ConfigError("Boost needs at least one round");
    auto e = std::make_shared<PipelineExpr>();
    e->type = PipelineExpr::Type::Boost;
    e->children = {std::move(inner)};
    e->n = n;
    return e;
}

inline ExprPtr mk_vote(std::vector<ExprPtr> members, bool soft) {
    if (members.size() < 2) throw ConfigError("Vote needs at least two members");
    auto e = std::make_shared<PipelineExpr>();
    e->type = PipelineExpr::Type::Vote;
    e->children = std::move(members);
    e->soft_vote = soft;
    return e;
}

inline ExprPtr mk_stack(std::vector<ExprPtr> members, ExprPtr final_est, bool passthrough) {
    if (members.size() < 2) throw ConfigError("Stack needs at least two base members");
    auto e = std::make_shared<PipelineExpr>();
    e->type = PipelineExpr::Type::Stack;
    e->children = std::move(members);
    e->stack_final = std::move(final_est);
    e->passthrough = passthrough;
    return e;
}

/// Canonical grammar string; parse(to_text(e)) reproduces e.
inline std::string to_text(const PipelineExpr& e) {
    using T = PipelineExpr::Type;
    switch (e.type) {
        case T::Learner: return e.learner.text();
        case T::Pre: return "Pr(" + e.mitigator.text() + ", " + to_text(*e.children[0]) + ")";
        case T::InEst: {
            std::string self = e.mitigator.text();
            PrejudiceParams defaults;
            if (e.mitigator.pr.eta == defaults.eta && e.mitigator.pr.l2 == defaults.l2 &&
                e.mitigator.pr.max_iters == defaults.max_iters)
                self = "In";
            if (!e.children.empty()) return self == "In" ? "In(" + to_text(*e.children[0]) + ")"
                                                         : self + "(" + to_text(*e.children[0]) + ")";
            return self;
        }
        case T::Post: return "Post(" + e.mitigator.text() + ", " + to_text(*e.children[0]) + ")";
        case T::Bag: return "Bag(" + to_text(*e.children[0]) + ", " + std::to_string(e.n) + ")";
        case T::Boost: return "Boost(" + to_text(*e.children[0]) + ", " + std::to_string(e.n) + ")";
        case T::Vote: {
            std::string s = "Vote([";
            for (std::size_t i = 0; i < e.children.size(); ++i)
                s += (i ? ", " : "") + to_text(*e.children[i]);
            return s + "], " + (e.soft_vote ? "soft" : "hard") + ")";
        }
        case T::Stack: {
            std::string s = "Stack([";
            for (std::size_t i = 0; i < e.children.size(); ++i)
                s += (i ? ", " : "") + to_text(*e.children[i]);
            s += "], " + to_text(*e.stack_final);
            s += ", passthrough=" + std::string(e.passthrough ? "true" : "false") + ")";
            return s;
        }
    }
    throw ConfigError("unknown node type");
}

inline std::string to_text(const ExprPtr& e) { return to_text(*e); }

// ---------------------------------------------------------------------------
// parser

namespace detail {

class PipelineParser {
  public:
    explicit PipelineParser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input after pipeline expression");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r'))
            ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'" +
                 (pos_ >= text_.size() ? " but input ended" : std::string(" but found '") + text_[pos_] + "'"));
        ++pos_;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    double number() {
        skip_ws();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc()) fail("expected a number");
        pos_ = std::size_t(ptr - text_.data());
        return v;
    }

    std::map<std::string, double> key_value_args() {
        std::map<std::string, double> out;
        expect('(');
        if (!peek_is(')')) {
            while (true) {
                std::string key = ident();
                expect('=');
                out[key] = number();
                if (peek_is(',')) {
                    expect(',');
                    continue;
                }
                break;
            }
        }
        expect(')');
        return out;
    }

    MitigatorSpec parse_mitigator(const std::string& name) {
        if (name == "Reweigh") return MitigatorSpec::reweigh();
        if (name == "DIR") {
            expect('(');
            double level;
            if (peek_is('l')) {  // DIR(level=x) alternative spelling
                std::string key = ident();
                if (key != "level") fail("DIR takes a repair level");
                expect('=');
                level = number();
            } else {
                level = number();
            }
            expect(')');
            return MitigatorSpec::dir(level);
        }
        if (name == "LFR") {
            auto kv = key_value_args();
            LfrParams p;
            for (const auto& [key, value] : kv) {
                if (key == "k") p.k = std::size_t(value);
                else if (key == "Ax") p.ax = value;
                else if (key == "Ay") p.ay = value;
                else if (key == "Az") p.az = value;
                else if (key == "iters") p.max_iters = std::size_t(value);
                else if (key == "restarts") p.restarts = std::size_t(value);
                else fail("unknown LFR parameter: " + key);
            }
            return MitigatorSpec::lfr_spec(p);
        }
        if (name == "PR") {
            PrejudiceParams p;
            if (peek_is('(')) {
                auto kv = key_value_args();
                for (const auto& [key, value] : kv) {
                    if (key == "eta") p.eta = value;
                    else if (key == "l2") p.l2 = value;
                    else if (key == "iters") p.max_iters = std::size_t(value);
                    else fail("unknown PR parameter: " + key);
                }
            }
            return MitigatorSpec::pr_spec(p);
        }
        if (name == "CEO") {
            MitigatorSpec m = MitigatorSpec::ceo(CeoCost::Weighted);
            if (peek_is('(')) {
                expect('(');
                std::string key = ident();
                if (key != "cost") fail("CEO takes cost=weighted|fpr|fnr");
                expect('=');
                std::string v = ident();
                try {
                    m.ceo_cost = ceo_cost_from_name(v);
                } catch (const ConfigError& err) {
                    fail(err.what());
                }
                expect(')');
            }
            return m;
        }
        fail("unknown mitigator: " + name);
    }

    static bool is_mitigator_name(const std::string& name) {
        return name == "Reweigh" || name == "DIR" || name == "LFR" || name == "PR" || name == "CEO";
    }

    static bool is_learner_name(const std::string& name) {
        return name == "tree" || name == "logreg" || name == "knn" || name == "gbt" || name == "dummy";
    }

    std::vector<ExprPtr> expr_list() {
        expect('[');
        std::vector<ExprPtr> out;
        out.push_back(parse_expr());
        while (peek_is(',')) {
            expect(',');
            out.push_back(parse_expr());
        }
        expect(']');
        return out;
    }

    std::size_t positive_int() {
        skip_ws();
        std::size_t at = pos_;
        double v = number();
        if (v < 1.0 || v != std::floor(v)) throw ParseError("expected a positive integer count", at);
        return std::size_t(v);
    }

    ExprPtr parse_expr() {
        skip_ws();
        std::size_t name_at = pos_;
        std::string name = ident();
        try {
            if (name == "Pr") {
                expect('(');
                MitigatorSpec m = parse_mitigator(ident());
                expect(',');
                ExprPtr inner = parse_expr();
                expect(')');
                return mk_pre(std::move(m), std::move(inner));
            }
            if (name == "Post") {
                expect('(');
                MitigatorSpec m = parse_mitigator(ident());
                expect(',');
                ExprPtr inner = parse_expr();
                expect(')');
                return mk_post(std::move(m), std::move(inner));
            }
            if (name == "In") {
                if (peek_is('(')) {
                    expect('(');
                    ExprPtr wrapped = parse_expr();
                    expect(')');
                    return mk_in(MitigatorSpec::pr_spec({}), std::move(wrapped));
                }
                return mk_in();
            }
            if (name == "PR") return mk_in(parse_mitigator(name));
            if (name == "Bag" || name == "Boost") {
                expect('(');
                ExprPtr inner = parse_expr();
                expect(',');
                std::size_t n = positive_int();
                expect(')');
                return name == "Bag" ? mk_bag(std::move(inner), n) : mk_boost(std::move(inner), n);
            }
            if (name == "Vote") {
                expect('(');
                auto members = expr_list();
                bool soft = false;
                if (peek_is(',')) {
                    expect(',');
                    std::string mode = ident();
                    if (mode == "soft") soft = true;
                    else if (mode != "hard") fail("voting mode must be hard or soft");
                }
                expect(')');
                return mk_vote(std::move(members), soft);
            }
            if (name == "Stack") {
                expect('(');
                auto members = expr_list();
                expect(',');
                ExprPtr final_est = parse_expr();
                bool passthrough = false;
                if (peek_is(',')) {
                    expect(',');
                    std::string key = ident();
                    if (key != "passthrough") fail("unknown Stack option: " + key);
                    expect('=');
                    std::string v = ident();
                    if (v == "true") passthrough = true;
                    else if (v != "false") fail("passthrough must be true or false");
                }
                expect(')');
                return mk_stack(std::move(members), std::move(final_est), passthrough);
            }
            if (is_mitigator_name(name))
                throw ParseError("mitigator " + name + " cannot stand alone as an estimator", name_at);
            if (is_learner_name(name)) {
                std::map<std::string, double> hyper;
                if (peek_is('(')) hyper = key_value_args();
                return mk_learner(LearnerSpec::make(learner_kind_from_name(name), std::move(hyper)));
            }
        } catch (const ConfigError& err) {
            throw ParseError(err.what(), name_at);
        }
        throw ParseError("unknown name: " + name, name_at);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse a pipeline grammar string. Syntax errors carry the byte offset.
inline ExprPtr parse_pipeline(std::string_view text) {
    detail::PipelineParser p(text);
    return p.parse();
}

}  // namespace fairens
