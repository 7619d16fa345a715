// Tolerant HTML tokenizer and tree builder. Approximates the living-standard
// recovery rules that matter for content extraction: implied html/head/body,
// implicit closing of p/li/dd/dt/td/tr/option/headings, void and raw-text
// elements, and ignoring of unmatched end tags.

#include <algorithm>
#include <array>
#include <cstring>
#include <optional>
#include <unordered_map>

#include "mmweb/dom.hpp"
#include "mmweb/text.hpp"

namespace mmweb {

namespace {

using Attrs = std::vector<std::pair<std::string, std::string>>;

bool one_of(std::string_view tag, std::initializer_list<std::string_view> set) {
    return std::find(set.begin(), set.end(), tag) != set.end();
}

bool is_void_tag(std::string_view t) {
    return one_of(t, {"area", "base", "br", "col", "embed", "hr", "img", "input", "keygen", "link", "meta", "param",
                      "source", "track", "wbr"});
}

bool is_raw_text_tag(std::string_view t) {
    return one_of(t, {"script", "style", "xmp", "iframe", "noembed", "noframes", "noscript", "textarea", "title",
                      "plaintext"});
}

bool is_head_tag(std::string_view t) {
    return one_of(t, {"base", "basefont", "bgsound", "link", "meta", "noscript", "script", "style", "template",
                      "title"});
}

bool closes_p(std::string_view t) {
    return one_of(t, {"address", "article", "aside", "blockquote", "center", "details", "dialog", "dir", "div", "dl",
                      "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
                      "header", "hgroup", "hr", "li", "dd", "dt", "listing", "main", "menu", "nav", "ol", "p",
                      "plaintext", "pre", "section", "summary", "table", "ul", "xmp"});
}

bool is_heading(std::string_view t) {
    return t.size() == 2 && t[0] == 'h' && t[1] >= '1' && t[1] <= '6';
}

const std::unordered_map<std::string_view, char32_t>& named_entities() {
    static const std::unordered_map<std::string_view, char32_t> table = {
        {"amp", U'&'},       {"lt", U'<'},          {"gt", U'>'},        {"quot", U'"'},      {"apos", U'\''},
        {"nbsp", 0xA0},      {"copy", 0xA9},        {"reg", 0xAE},       {"trade", 0x2122},   {"mdash", 0x2014},
        {"ndash", 0x2013},   {"hellip", 0x2026},    {"lsquo", 0x2018},   {"rsquo", 0x2019},   {"ldquo", 0x201C},
        {"rdquo", 0x201D},   {"laquo", 0xAB},       {"raquo", 0xBB},     {"bull", 0x2022},    {"middot", 0xB7},
        {"deg", 0xB0},       {"euro", 0x20AC},      {"pound", 0xA3},     {"yen", 0xA5},       {"cent", 0xA2},
        {"sect", 0xA7},      {"para", 0xB6},        {"times", 0xD7},     {"divide", 0xF7},    {"plusmn", 0xB1},
        {"frac12", 0xBD},    {"frac14", 0xBC},      {"frac34", 0xBE},    {"eacute", 0xE9},    {"egrave", 0xE8},
        {"ecirc", 0xEA},     {"euml", 0xEB},        {"aacute", 0xE1},    {"agrave", 0xE0},    {"acirc", 0xE2},
        {"auml", 0xE4},      {"aring", 0xE5},       {"atilde", 0xE3},    {"ccedil", 0xE7},    {"iacute", 0xED},
        {"igrave", 0xEC},    {"icirc", 0xEE},       {"iuml", 0xEF},      {"oacute", 0xF3},    {"ograve", 0xF2},
        {"ocirc", 0xF4},     {"ouml", 0xF6},        {"otilde", 0xF5},    {"oslash", 0xF8},    {"uacute", 0xFA},
        {"ugrave", 0xF9},    {"ucirc", 0xFB},       {"uuml", 0xFC},      {"ntilde", 0xF1},    {"szlig", 0xDF},
        {"Eacute", 0xC9},    {"Egrave", 0xC8},      {"Agrave", 0xC0},    {"Auml", 0xC4},      {"Ouml", 0xD6},
        {"Uuml", 0xDC},      {"Ccedil", 0xC7},      {"Ntilde", 0xD1},    {"iexcl", 0xA1},     {"iquest", 0xBF},
        {"shy", 0xAD},       {"zwj", 0x200D},       {"zwnj", 0x200C},    {"thinsp", 0x2009},  {"ensp", 0x2002},
        {"emsp", 0x2003},    {"larr", 0x2190},      {"rarr", 0x2192},    {"uarr", 0x2191},    {"darr", 0x2193},
        {"hearts", 0x2665},  {"star", 0x2606},      {"check", 0x2713},   {"prime", 0x2032},   {"Prime", 0x2033},
    };
    return table;
}

std::string decode_entities(std::string_view s) {
    if (s.find('&') == std::string_view::npos) return std::string(s);
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        std::size_t j = i + 1;
        if (j < s.size() && s[j] == '#') {
            ++j;
            bool hex = j < s.size() && (s[j] == 'x' || s[j] == 'X');
            if (hex) ++j;
            std::size_t start = j;
            while (j < s.size() && (hex ? std::isxdigit(static_cast<unsigned char>(s[j])) : std::isdigit(static_cast<unsigned char>(s[j]))))
                ++j;
            if (j > start && j - start <= 8) {
                unsigned long cp = std::stoul(std::string(s.substr(start, j - start)), nullptr, hex ? 16 : 10);
                if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
                text::append_utf8(out, static_cast<char32_t>(cp));
                if (j < s.size() && s[j] == ';') ++j;
                i = j;
                continue;
            }
        } else {
            std::size_t start = j;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j])) && j - start < 32) ++j;
            const std::string_view name = s.substr(start, j - start);
            const bool semicolon = j < s.size() && s[j] == ';';
            auto it = named_entities().find(name);
            if (it != named_entities().end() &&
                (semicolon || one_of(name, {"amp", "lt", "gt", "quot", "nbsp", "copy", "reg"}))) {
                text::append_utf8(out, it->second);
                i = semicolon ? j + 1 : j;
                continue;
            }
        }
        out.push_back('&');
        ++i;
    }
    return out;
}

struct Token {
    enum class Kind { text, start, end, comment, eof } kind = Kind::eof;
    std::string name;
    Attrs attrs;
    bool self_closing = false;
    std::string data;
};

class Tokenizer {
public:
    explicit Tokenizer(std::string_view src) : s_(src) {}

    Token next() {
        if (pending_raw_) return raw_text();
        Token t;
        if (pos_ >= s_.size()) return t;
        if (s_[pos_] != '<') return text_token();
        if (starts_with_at(pos_ + 1, "!--")) {
            auto end = s_.find("-->", pos_ + 4);
            t.kind = Token::Kind::comment;
            if (end == std::string_view::npos) {
                t.data = std::string(s_.substr(pos_ + 4));
                pos_ = s_.size();
            } else {
                t.data = std::string(s_.substr(pos_ + 4, end - pos_ - 4));
                pos_ = end + 3;
            }
            return t;
        }
        if (pos_ + 1 < s_.size() && (s_[pos_ + 1] == '!' || s_[pos_ + 1] == '?')) {
            // doctype, CDATA and processing instructions become bogus comments
            auto end = s_.find('>', pos_);
            t.kind = Token::Kind::comment;
            t.data = std::string(s_.substr(pos_ + 2, end == std::string_view::npos ? std::string_view::npos : end - pos_ - 2));
            pos_ = end == std::string_view::npos ? s_.size() : end + 1;
            return t;
        }
        if (pos_ + 2 < s_.size() && s_[pos_ + 1] == '/' && std::isalpha(static_cast<unsigned char>(s_[pos_ + 2]))) {
            pos_ += 2;
            t.kind = Token::Kind::end;
            t.name = read_name();
            auto end = s_.find('>', pos_);
            pos_ = end == std::string_view::npos ? s_.size() : end + 1;
            return t;
        }
        if (pos_ + 1 < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_ + 1]))) {
            ++pos_;
            return start_tag();
        }
        return text_token();
    }

    void expect_raw_text(std::string name) { pending_raw_ = std::move(name); }

private:
    bool starts_with_at(std::size_t at, std::string_view lit) const {
        return s_.size() >= at + lit.size() && s_.substr(at, lit.size()) == lit;
    }

    static bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

    std::string read_name() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && !is_ws(s_[pos_]) && s_[pos_] != '/' && s_[pos_] != '>') ++pos_;
        return text::ascii_lower(s_.substr(start, pos_ - start));
    }

    void skip_ws() {
        while (pos_ < s_.size() && is_ws(s_[pos_])) ++pos_;
    }

    Token start_tag() {
        Token t;
        t.kind = Token::Kind::start;
        t.name = read_name();
        while (pos_ < s_.size()) {
            skip_ws();
            if (pos_ >= s_.size()) break;
            if (s_[pos_] == '>') {
                ++pos_;
                return t;
            }
            if (s_[pos_] == '/') {
                ++pos_;
                if (pos_ < s_.size() && s_[pos_] == '>') {
                    t.self_closing = true;
                    ++pos_;
                    return t;
                }
                continue;
            }
            std::size_t start = pos_;
            while (pos_ < s_.size() && !is_ws(s_[pos_]) && s_[pos_] != '/' && s_[pos_] != '>' &&
                   (s_[pos_] != '=' || pos_ == start))
                ++pos_;
            std::string name = text::ascii_lower(s_.substr(start, pos_ - start));
            skip_ws();
            std::string value;
            if (pos_ < s_.size() && s_[pos_] == '=') {
                ++pos_;
                skip_ws();
                if (pos_ < s_.size() && (s_[pos_] == '"' || s_[pos_] == '\'')) {
                    char q = s_[pos_++];
                    auto end = s_.find(q, pos_);
                    if (end == std::string_view::npos) end = s_.size();
                    value = decode_entities(s_.substr(pos_, end - pos_));
                    pos_ = std::min(end + 1, s_.size());
                } else {
                    std::size_t vs = pos_;
                    while (pos_ < s_.size() && !is_ws(s_[pos_]) && s_[pos_] != '>') ++pos_;
                    value = decode_entities(s_.substr(vs, pos_ - vs));
                }
            }
            if (!name.empty() && std::none_of(t.attrs.begin(), t.attrs.end(), [&](const auto& a) { return a.first == name; }))
                t.attrs.emplace_back(std::move(name), std::move(value));
        }
        return t;
    }

    Token text_token() {
        Token t;
        t.kind = Token::Kind::text;
        std::size_t start = pos_;
        std::size_t next = s_.find('<', pos_ + 1);
        if (next == std::string_view::npos) next = s_.size();
        pos_ = next;
        t.data = decode_entities(s_.substr(start, next - start));
        return t;
    }

    Token raw_text() {
        Token t;
        t.kind = Token::Kind::text;
        const std::string name = std::move(*pending_raw_);
        pending_raw_.reset();
        std::size_t search = pos_;
        std::size_t end = s_.size();
        while (true) {
            auto lt = s_.find("</", search);
            if (lt == std::string_view::npos) break;
            if (lt + 2 + name.size() <= s_.size() &&
                text::ascii_lower(s_.substr(lt + 2, name.size())) == name &&
                (lt + 2 + name.size() == s_.size() || is_ws(s_[lt + 2 + name.size()]) ||
                 s_[lt + 2 + name.size()] == '>' || s_[lt + 2 + name.size()] == '/')) {
                end = lt;
                break;
            }
            search = lt + 2;
        }
        std::string_view body = s_.substr(pos_, end - pos_);
        t.data = (name == "title" || name == "textarea") ? decode_entities(body) : std::string(body);
        pos_ = end;
        if (end < s_.size()) {
            auto gt = s_.find('>', end);
            pos_ = gt == std::string_view::npos ? s_.size() : gt + 1;
        }
        return t;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::optional<std::string> pending_raw_;
};

class TreeBuilder {
public:
    TreeBuilder() : root_(DomNode::document()) {}

    DomNode build(std::string_view src) {
        Tokenizer tok(src);
        while (true) {
            Token t = tok.next();
            if (t.kind == Token::Kind::eof) break;
            process(std::move(t), tok);
        }
        return std::move(root_);
    }

private:
    enum class Mode { initial, before_head, in_head, after_head, in_body };

    DomNode& current() { return stack_.empty() ? root_ : *stack_.back(); }

    DomNode* append(DomNode node) {
        DomNode& parent = current();
        parent.children.push_back(std::move(node));
        return &parent.children.back();
    }

    void append_text(std::string data) {
        DomNode& parent = current();
        if (!parent.children.empty() && parent.children.back().is_text()) {
            parent.children.back().text += data;
        } else {
            parent.children.push_back(DomNode::text_node(std::move(data)));
        }
    }

    static bool only_ws(std::string_view s) {
        return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; });
    }

    void ensure_html(Attrs attrs = {}) {
        if (html_) return;
        html_ = append(DomNode::element("html", std::move(attrs)));
        stack_.push_back(html_);
    }

    void merge_attrs(DomNode* node, const Attrs& attrs) {
        if (!node) return;
        for (const auto& a : attrs) {
            if (!node->attr(a.first)) node->attributes.push_back(a);
        }
    }

    DomNode* find_head() {
        for (auto& c : html_->children) {
            if (c.tag == "head") return &c;
        }
        return nullptr;
    }

    void open_head(Attrs attrs = {}) {
        stack_.push_back(append(DomNode::element("head", std::move(attrs))));
        mode_ = Mode::in_head;
    }

    void close_head() {
        while (!stack_.empty() && stack_.back() != html_) stack_.pop_back();
        mode_ = Mode::after_head;
    }

    void open_body(Attrs attrs = {}) {
        while (!stack_.empty() && stack_.back() != html_) stack_.pop_back();
        body_ = append(DomNode::element("body", std::move(attrs)));
        stack_.push_back(body_);
        mode_ = Mode::in_body;
    }

    bool in_foreign() const {
        return std::any_of(stack_.begin(), stack_.end(), [](const DomNode* n) { return n->tag == "svg" || n->tag == "math"; });
    }

    // Index of the nearest open element named `tag`, stopping at boundaries.
    std::optional<std::size_t> find_open(std::string_view tag, std::initializer_list<std::string_view> boundaries) const {
        for (std::size_t i = stack_.size(); i-- > 0;) {
            if (stack_[i]->tag == tag) return i;
            if (one_of(stack_[i]->tag, boundaries)) return std::nullopt;
        }
        return std::nullopt;
    }

    void pop_through(std::size_t index) {
        // never pop html/body
        while (stack_.size() > index && stack_.back() != body_ && stack_.back() != html_) stack_.pop_back();
    }

    void close_p_if_open() {
        if (auto i = find_open("p", {"applet", "caption", "html", "table", "td", "th", "marquee", "object", "template", "button", "body"}))
            pop_through(*i);
    }

    void insert_element(Token& t, Tokenizer& tok) {
        if (is_raw_text_tag(t.name)) {
            DomNode* node = append(DomNode::element(t.name, std::move(t.attrs)));
            tok.expect_raw_text(t.name);
            Token raw = tok.next();
            if (!raw.data.empty() && !one_of(node->tag, {"iframe", "noembed", "noframes"}))
                node->children.push_back(DomNode::text_node(std::move(raw.data)));
            return;
        }
        const bool self_close = t.self_closing && in_foreign();
        DomNode* node = append(DomNode::element(t.name, std::move(t.attrs)));
        if (!is_void_tag(node->tag) && !self_close) stack_.push_back(node);
    }

    void process(Token t, Tokenizer& tok) {
        switch (mode_) {
            case Mode::initial:
                if (t.kind == Token::Kind::comment) {
                    root_.children.push_back(DomNode::comment(std::move(t.data)));
                    return;
                }
                if (t.kind == Token::Kind::text && only_ws(t.data)) return;
                if (t.kind == Token::Kind::start && t.name == "html") {
                    ensure_html(std::move(t.attrs));
                    mode_ = Mode::before_head;
                    return;
                }
                ensure_html();
                mode_ = Mode::before_head;
                return process(std::move(t), tok);
            case Mode::before_head:
                if (t.kind == Token::Kind::comment) {
                    append(DomNode::comment(std::move(t.data)));
                    return;
                }
                if (t.kind == Token::Kind::text && only_ws(t.data)) return;
                if (t.kind == Token::Kind::start && t.name == "html") {
                    merge_attrs(html_, t.attrs);
                    return;
                }
                if (t.kind == Token::Kind::start && t.name == "head") {
                    open_head(std::move(t.attrs));
                    return;
                }
                if (t.kind == Token::Kind::end && !one_of(t.name, {"head", "body", "html", "br"})) return;
                open_head();
                return process(std::move(t), tok);
            case Mode::in_head:
                if (t.kind == Token::Kind::comment) {
                    append(DomNode::comment(std::move(t.data)));
                    return;
                }
                if (t.kind == Token::Kind::text && only_ws(t.data)) return;
                if (t.kind == Token::Kind::start && is_head_tag(t.name)) {
                    insert_element(t, tok);
                    return;
                }
                if (t.kind == Token::Kind::start && t.name == "head") return;
                if (t.kind == Token::Kind::end && t.name == "head") {
                    close_head();
                    return;
                }
                if (t.kind == Token::Kind::end && !one_of(t.name, {"body", "html", "br"})) return;
                close_head();
                return process(std::move(t), tok);
            case Mode::after_head:
                if (t.kind == Token::Kind::comment) {
                    append(DomNode::comment(std::move(t.data)));
                    return;
                }
                if (t.kind == Token::Kind::text && only_ws(t.data)) return;
                if (t.kind == Token::Kind::start && t.name == "body") {
                    open_body(std::move(t.attrs));
                    return;
                }
                if (t.kind == Token::Kind::start && t.name == "html") {
                    merge_attrs(html_, t.attrs);
                    return;
                }
                if (t.kind == Token::Kind::start && is_head_tag(t.name) && find_head()) {
                    stack_.push_back(find_head());
                    insert_element(t, tok);
                    stack_.pop_back();
                    return;
                }
                if (t.kind == Token::Kind::end && !one_of(t.name, {"body", "html", "br"})) return;
                open_body();
                return process(std::move(t), tok);
            case Mode::in_body:
                in_body(std::move(t), tok);
                return;
        }
    }

    void in_body(Token t, Tokenizer& tok) {
        switch (t.kind) {
            case Token::Kind::text:
                append_text(std::move(t.data));
                return;
            case Token::Kind::comment:
                append(DomNode::comment(std::move(t.data)));
                return;
            case Token::Kind::start:
                start_in_body(t, tok);
                return;
            case Token::Kind::end:
                end_in_body(t, tok);
                return;
            case Token::Kind::eof:
                return;
        }
    }

    void start_in_body(Token& t, Tokenizer& tok) {
        const std::string& name = t.name;
        if (name == "html") {
            merge_attrs(html_, t.attrs);
            return;
        }
        if (name == "body") {
            merge_attrs(body_, t.attrs);
            return;
        }
        if (name == "head") return;
        if (closes_p(name)) close_p_if_open();
        if (is_heading(name) && is_heading(current().tag)) stack_.pop_back();
        if (name == "li") {
            if (auto i = find_open("li", {"ul", "ol", "table", "body"})) pop_through(*i);
        } else if (name == "dd" || name == "dt") {
            for (std::size_t i = stack_.size(); i-- > 0;) {
                if (stack_[i]->tag == "dd" || stack_[i]->tag == "dt") {
                    pop_through(i);
                    break;
                }
                if (one_of(stack_[i]->tag, {"dl", "table", "body"})) break;
            }
        } else if (name == "option" && current().tag == "option") {
            stack_.pop_back();
        } else if (name == "td" || name == "th") {
            for (std::size_t i = stack_.size(); i-- > 0;) {
                if (stack_[i]->tag == "td" || stack_[i]->tag == "th") {
                    pop_through(i);
                    break;
                }
                if (one_of(stack_[i]->tag, {"tr", "table", "body"})) break;
            }
        } else if (name == "tr") {
            if (auto i = find_open("tr", {"table", "body"})) pop_through(*i);
        } else if (name == "a") {
            if (auto i = find_open("a", {"body", "table", "td", "th"})) pop_through(*i);
        }
        insert_element(t, tok);
    }

    void end_in_body(Token& t, Tokenizer& tok) {
        const std::string& name = t.name;
        if (name == "br") {
            Token br;
            br.kind = Token::Kind::start;
            br.name = "br";
            insert_element(br, tok);
            return;
        }
        if (name == "body" || name == "html") return;
        if (name == "p") {
            close_p_if_open();
            return;
        }
        auto i = find_open(name, {"table", "td", "th", "caption", "template", "html", "body"});
        if (i) pop_through(*i);
    }

    DomNode root_;
    std::vector<DomNode*> stack_;
    DomNode* html_ = nullptr;
    DomNode* body_ = nullptr;
    Mode mode_ = Mode::initial;
};

}  // namespace

DomTree parse_html(std::string_view raw_html) {
    const std::string decoded = text::decode_utf8_lossy(raw_html);
    return TreeBuilder().build(decoded);
}

}  // namespace mmweb
