#include "viewfed/vpath.hpp"

#include <cctype>

namespace viewfed {

namespace {

class PathParser {
public:
    explicit PathParser(const std::string& in) : in_(in) {}

    PathExpr parse() {
        PathExpr expr;
        if (peek_is('/')) {
            expr.absolute = true;
            ++pos_;
        }
        expr.steps.push_back(parse_step());
        while (peek_is('/')) {
            ++pos_;
            expr.steps.push_back(parse_step());
        }
        if (pos_ != in_.size()) fail("unexpected trailing input");
        for (std::size_t i = 0; i + 1 < expr.steps.size(); ++i) {
            if (expr.steps[i].is_attribute)
                throw PathSyntaxError(0, "attribute selector allowed only as the final step");
        }
        return expr;
    }

private:
    const std::string& in_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& reason) { throw PathSyntaxError(pos_, reason); }

    bool peek_is(char c) const { return pos_ < in_.size() && in_[pos_] == c; }

    std::string parse_name() {
        std::size_t start = pos_;
        while (pos_ < in_.size()) {
            char c = in_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-') {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ == start) fail("expected a name");
        std::string name = in_.substr(start, pos_ - start);
        if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')
            throw PathSyntaxError(start, "invalid name: " + name);
        return name;
    }

    Step parse_step() {
        Step step;
        if (peek_is('*')) {
            ++pos_;
            step.name = "*";
        } else if (peek_is('@')) {
            ++pos_;
            step.is_attribute = true;
            step.name = parse_name();
        } else {
            step.name = parse_name();
        }
        if (peek_is('[')) {
            ++pos_;
            step.predicate = parse_pred();
            if (!peek_is(']')) fail("expected ']'");
            ++pos_;
        }
        return step;
    }

    std::variant<AttrEqualsPred, PositionPred> parse_pred() {
        if (peek_is('@')) {
            ++pos_;
            AttrEqualsPred pred;
            pred.attr = parse_name();
            if (!peek_is('=')) fail("predicate requires '='");
            ++pos_;
            if (!peek_is('\'')) fail("expected quoted literal");
            ++pos_;
            auto end = in_.find('\'', pos_);
            if (end == std::string::npos) fail("unterminated literal");
            pred.literal = in_.substr(pos_, end - pos_);
            pos_ = end + 1;
            return pred;
        }
        std::size_t start = pos_;
        while (pos_ < in_.size() && std::isdigit(static_cast<unsigned char>(in_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected attribute predicate or position");
        int n = std::stoi(in_.substr(start, pos_ - start));
        if (n < 1) throw PathSyntaxError(start, "positions are 1-based");
        return PositionPred{n};
    }
};

bool selector_matches(const Step& step, const Node& n) {
    return step.name == "*" || step.name == n.name();
}

// Predicate applied to one context's candidate list; position counts within it.
std::vector<const Node*> apply_pred(const Step& step, std::vector<const Node*> candidates) {
    if (!step.predicate) return candidates;
    if (const auto* attr = std::get_if<AttrEqualsPred>(&*step.predicate)) {
        std::vector<const Node*> kept;
        for (const Node* n : candidates) {
            const std::string* v = n->attribute(attr->attr);
            if (v && *v == attr->literal) kept.push_back(n);
        }
        return kept;
    }
    int idx = std::get<PositionPred>(*step.predicate).index;
    if (idx >= 1 && static_cast<std::size_t>(idx) <= candidates.size())
        return {candidates[idx - 1]};
    return {};
}

}  // namespace

PathExpr vpath_parse(const std::string& expr) {
    return PathParser(expr).parse();
}

std::vector<PathResult> vpath_eval(const Document& doc, const Node& context,
                                   const PathExpr& path) {
    std::vector<const Node*> current;
    std::size_t first = 0;

    if (path.absolute) {
        const Step& root_step = path.steps.front();
        if (root_step.is_attribute) {
            // '/@attr' — attribute of the root.
            std::vector<PathResult> out;
            if (const std::string* v = doc.root.attribute(root_step.name))
                out.push_back(PathResult{nullptr, *v});
            return out;
        }
        std::vector<const Node*> candidates;
        if (selector_matches(root_step, doc.root)) candidates.push_back(&doc.root);
        current = apply_pred(root_step, std::move(candidates));
        first = 1;
    } else {
        current = {&context};
    }

    for (std::size_t i = first; i < path.steps.size(); ++i) {
        const Step& step = path.steps[i];
        if (step.is_attribute) {
            std::vector<PathResult> out;
            for (const Node* ctx : current) {
                std::vector<const Node*> holders{ctx};
                // positional predicate over the per-context candidate list
                if (step.predicate) {
                    if (const auto* pos = std::get_if<PositionPred>(&*step.predicate)) {
                        if (pos->index != 1) holders.clear();
                    } else {
                        holders.clear();
                    }
                }
                for (const Node* h : holders) {
                    if (const std::string* v = h->attribute(step.name))
                        out.push_back(PathResult{nullptr, *v});
                }
            }
            return out;
        }
        std::vector<const Node*> next;
        for (const Node* ctx : current) {
            std::vector<const Node*> candidates;
            for (const Node& child : ctx->children()) {
                if (selector_matches(step, child)) candidates.push_back(&child);
            }
            for (const Node* n : apply_pred(step, std::move(candidates))) next.push_back(n);
        }
        current = std::move(next);
    }

    std::vector<PathResult> out;
    out.reserve(current.size());
    for (const Node* n : current) out.push_back(PathResult{n, std::nullopt});
    return out;
}

std::vector<PathResult> vpath_eval(const Document& doc, const PathExpr& path) {
    return vpath_eval(doc, doc.root, path);
}

}  // namespace viewfed
