#include "viewfed/document.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

#include <nlohmann/json.hpp>

namespace viewfed {

using ordered_json = nlohmann::ordered_json;

DocFormat parse_format(const std::string& s) {
    if (s == "xml") return DocFormat::Xml;
    if (s == "json") return DocFormat::Json;
    throw std::invalid_argument("unknown document format: " + s);
}

std::string to_string(DocFormat f) {
    return f == DocFormat::Xml ? "xml" : "json";
}

void Node::set_attribute(const std::string& name, std::string value) {
    for (auto& [k, v] : attrs_) {
        if (k == name) {
            v = std::move(value);
            return;
        }
    }
    attrs_.emplace_back(name, std::move(value));
}

void Node::remove_attribute(const std::string& name) {
    attrs_.erase(std::remove_if(attrs_.begin(), attrs_.end(),
                                [&](const auto& kv) { return kv.first == name; }),
                 attrs_.end());
}

const std::string* Node::attribute(const std::string& name) const {
    for (const auto& [k, v] : attrs_) {
        if (k == name) return &v;
    }
    return nullptr;
}

Node& Node::add_child(Node child) {
    children_.push_back(std::move(child));
    return children_.back();
}

std::string Node::string_value() const {
    std::string out;
    if (text_) out += *text_;
    for (const auto& c : children_) out += c.string_value();
    return out;
}

bool valid_element_name(const std::string& name) {
    if (name.empty()) return false;
    auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto tail = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    };
    if (!head(name[0])) return false;
    return std::all_of(name.begin() + 1, name.end(), tail);
}

bool valid_attribute_name(const std::string& name) {
    // Same grammar as element names plus ':' for reserved directive prefixes.
    if (name.empty()) return false;
    auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto tail = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' ||
               c == ':';
    };
    if (!head(name[0])) return false;
    return std::all_of(name.begin() + 1, name.end(), tail);
}

namespace {

bool whitespace_only(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

// ---------------------------------------------------------------------------
// XML subset parser: no namespaces, no DTD, no processing instructions other
// than the optional leading declaration; comments discarded; the five built-in
// entity references only.

class XmlParser {
public:
    explicit XmlParser(const std::string& input) : in_(input) {}

    Document parse() {
        skip_bom();
        skip_misc(true);
        if (!peek_is('<')) fail("expected root element");
        Document doc;
        doc.root = parse_element();
        skip_misc(false);
        if (pos_ != in_.size()) fail("content after root element");
        return doc;
    }

private:
    const std::string& in_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& reason) { throw ParseError(pos_, reason); }

    bool eof() const { return pos_ >= in_.size(); }
    char cur() const { return in_[pos_]; }
    bool peek_is(char c) const { return !eof() && in_[pos_] == c; }
    bool starts_with(const char* s) const { return in_.compare(pos_, std::strlen(s), s) == 0; }

    void skip_bom() {
        if (in_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3;
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(cur()))) ++pos_;
    }

    // Whitespace, comments and (if allowed) the XML declaration.
    void skip_misc(bool allow_decl) {
        for (;;) {
            skip_ws();
            if (starts_with("<?xml")) {
                if (!allow_decl) fail("processing instructions are not supported");
                auto end = in_.find("?>", pos_);
                if (end == std::string::npos) fail("unterminated XML declaration");
                pos_ = end + 2;
                allow_decl = false;
                continue;
            }
            if (starts_with("<?")) fail("processing instructions are not supported");
            if (starts_with("<!--")) {
                auto end = in_.find("-->", pos_ + 4);
                if (end == std::string::npos) fail("unterminated comment");
                pos_ = end + 3;
                continue;
            }
            if (starts_with("<!")) fail("DTD and markup declarations are not supported");
            return;
        }
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_' ||
                          cur() == '.' || cur() == '-' || cur() == ':')) {
            ++pos_;
        }
        if (pos_ == start) fail("expected a name");
        return in_.substr(start, pos_ - start);
    }

    std::string decode_entities(const std::string& raw, std::size_t base) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out += raw[i];
                continue;
            }
            auto semi = raw.find(';', i);
            if (semi == std::string::npos) throw ParseError(base + i, "unterminated entity");
            std::string name = raw.substr(i + 1, semi - i - 1);
            if (name == "lt") out += '<';
            else if (name == "gt") out += '>';
            else if (name == "amp") out += '&';
            else if (name == "quot") out += '"';
            else if (name == "apos") out += '\'';
            else throw ParseError(base + i, "unsupported entity: &" + name + ";");
            i = semi;
        }
        return out;
    }

    Node parse_element() {
        std::size_t start = pos_;
        if (!peek_is('<')) fail("expected '<'");
        ++pos_;
        std::string name = parse_name();
        if (!valid_element_name(name)) throw ParseError(start + 1, "invalid element name: " + name);
        Node node(name);

        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated start tag");
            if (cur() == '>') {
                ++pos_;
                parse_content(node);
                return node;
            }
            if (starts_with("/>")) {
                pos_ += 2;
                return node;
            }
            std::size_t attr_pos = pos_;
            std::string attr = parse_name();
            if (!valid_attribute_name(attr))
                throw ParseError(attr_pos, "invalid attribute name: " + attr);
            if (node.attribute(attr))
                throw ParseError(attr_pos, "duplicate attribute: " + attr);
            skip_ws();
            if (!peek_is('=')) fail("expected '=' after attribute name");
            ++pos_;
            skip_ws();
            if (eof() || (cur() != '"' && cur() != '\'')) fail("expected quoted attribute value");
            char quote = cur();
            ++pos_;
            auto end = in_.find(quote, pos_);
            if (end == std::string::npos) fail("unterminated attribute value");
            std::string raw = in_.substr(pos_, end - pos_);
            if (raw.find('<') != std::string::npos)
                throw ParseError(pos_, "'<' not allowed in attribute value");
            node.set_attribute(attr, decode_entities(raw, pos_));
            pos_ = end + 1;
        }
    }

    void parse_content(Node& node) {
        std::string text;
        std::size_t text_pos = pos_;
        for (;;) {
            if (eof()) fail("unterminated element: " + node.name());
            if (cur() == '<') {
                if (starts_with("</")) {
                    std::size_t close_pos = pos_;
                    pos_ += 2;
                    std::string closing = parse_name();
                    skip_ws();
                    if (!peek_is('>')) fail("expected '>' in end tag");
                    ++pos_;
                    if (closing != node.name())
                        throw ParseError(close_pos,
                                         "mismatched end tag </" + closing + "> for <" +
                                             node.name() + ">");
                    finish(node, text, text_pos);
                    return;
                }
                if (starts_with("<!--")) {
                    auto end = in_.find("-->", pos_ + 4);
                    if (end == std::string::npos) fail("unterminated comment");
                    pos_ = end + 3;
                    continue;
                }
                if (starts_with("<!") || starts_with("<?"))
                    fail("unsupported markup inside element");
                node.add_child(parse_element());
                continue;
            }
            std::size_t next = in_.find('<', pos_);
            if (next == std::string::npos) fail("unterminated element: " + node.name());
            text += decode_entities(in_.substr(pos_, next - pos_), pos_);
            pos_ = next;
        }
    }

    void finish(Node& node, const std::string& text, std::size_t text_pos) {
        if (!node.children().empty()) {
            if (!whitespace_only(text)) throw MixedContentError(text_pos, node.name());
            return;  // whitespace between children is insignificant
        }
        if (!text.empty()) node.set_text(text);
    }
};

// ---------------------------------------------------------------------------
// XML serialization: deterministic, attributes in insertion order, no
// insignificant whitespace, declaration always emitted.

void escape_text(const std::string& s, std::string& out) {
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
}

void escape_attr(const std::string& s, std::string& out) {
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
}

void serialize_node(const Node& n, std::string& out) {
    out += '<';
    out += n.name();
    for (const auto& [k, v] : n.attributes()) {
        out += ' ';
        out += k;
        out += "=\"";
        escape_attr(v, out);
        out += '"';
    }
    bool has_text = n.text() && !n.text()->empty();
    if (n.children().empty() && !has_text) {
        out += "/>";
        return;
    }
    out += '>';
    if (has_text) escape_text(*n.text(), out);
    for (const auto& c : n.children()) serialize_node(c, out);
    out += "</";
    out += n.name();
    out += '>';
}

// ---------------------------------------------------------------------------
// JSON mapping: element -> object under its name key; attributes as "@name"
// members; repeated child names as arrays; text as "#text". "#text" and child
// members are mutually exclusive (mixed content is disallowed).

ordered_json node_to_json(const Node& n) {
    ordered_json obj = ordered_json::object();
    for (const auto& [k, v] : n.attributes()) obj["@" + k] = v;
    if (n.text() && !n.text()->empty()) obj["#text"] = *n.text();
    for (const auto& c : n.children()) {
        auto it = obj.find(c.name());
        if (it == obj.end()) {
            obj[c.name()] = node_to_json(c);
        } else if (it->is_array()) {
            it->push_back(node_to_json(c));
        } else {
            ordered_json arr = ordered_json::array();
            arr.push_back(std::move(*it));
            arr.push_back(node_to_json(c));
            *it = std::move(arr);
        }
    }
    return obj;
}

Node json_to_node(const std::string& name, const ordered_json& obj) {
    if (!obj.is_object()) throw ParseError(0, "element '" + name + "' must map to an object");
    if (!valid_element_name(name)) throw ParseError(0, "invalid element name: " + name);
    Node node(name);
    bool has_text = false;
    for (const auto& [key, value] : obj.items()) {
        if (key.empty()) throw ParseError(0, "empty member name");
        if (key[0] == '@') {
            std::string attr = key.substr(1);
            if (!valid_attribute_name(attr)) throw ParseError(0, "invalid attribute name: " + attr);
            if (!value.is_string()) throw ParseError(0, "attribute '" + attr + "' must be a string");
            if (node.attribute(attr)) throw ParseError(0, "duplicate attribute: " + attr);
            node.set_attribute(attr, value.get<std::string>());
        } else if (key == "#text") {
            if (!value.is_string()) throw ParseError(0, "#text must be a string");
            has_text = true;
            node.set_text(value.get<std::string>());
        } else if (value.is_array()) {
            for (const auto& item : value) node.add_child(json_to_node(key, item));
        } else {
            node.add_child(json_to_node(key, value));
        }
    }
    if (has_text && !node.children().empty() && !whitespace_only(*node.text()))
        throw MixedContentError(0, name);
    return node;
}

}  // namespace

Document doc_parse(const std::string& input, DocFormat format) {
    if (format == DocFormat::Xml) return XmlParser(input).parse();

    ordered_json j;
    try {
        j = ordered_json::parse(input);
    } catch (const ordered_json::parse_error& e) {
        throw ParseError(e.byte, e.what());
    }
    if (!j.is_object() || j.size() != 1)
        throw ParseError(0, "root must be an object with exactly one key");
    const auto& item = j.items().begin();
    return Document{json_to_node(item.key(), item.value())};
}

std::string doc_serialize(const Document& doc, DocFormat format) {
    if (format == DocFormat::Xml) {
        std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>";
        serialize_node(doc.root, out);
        return out;
    }
    ordered_json j = ordered_json::object();
    j[doc.root.name()] = node_to_json(doc.root);
    return j.dump();
}

bool node_equal(const Node& a, const Node& b) {
    if (a.name() != b.name()) return false;
    if (a.attributes().size() != b.attributes().size()) return false;
    for (const auto& [k, v] : a.attributes()) {
        const std::string* other = b.attribute(k);
        if (!other || *other != v) return false;
    }
    const std::string ta = a.text().value_or("");
    const std::string tb = b.text().value_or("");
    if (ta != tb) return false;
    if (a.children().size() != b.children().size()) return false;
    for (std::size_t i = 0; i < a.children().size(); ++i) {
        if (!node_equal(a.children()[i], b.children()[i])) return false;
    }
    return true;
}

bool doc_equal(const Document& a, const Document& b) {
    return node_equal(a.root, b.root);
}

}  // namespace viewfed
