#include "mmweb/simplify.hpp"

#include <algorithm>

#include "mmweb/text.hpp"

namespace mmweb {

SimplifyConfig SimplifyConfig::defaults() {
    SimplifyConfig c;
    c.unwrap_tags = {"a",    "abbr", "acronym", "b",      "bdi",   "bdo",    "big", "cite", "code",  "data",  "dfn",
                     "em",   "font", "i",       "ins",    "kbd",   "mark",   "q",   "s",    "samp",  "shadow", "small",
                     "span", "strike", "strong", "sub",   "sup",   "time",   "tt",  "u",    "var",   "wbr"};
    c.structural_tags = {"address", "article", "aside", "blink", "blockquote", "body",    "br",   "caption",
                         "center",  "dd",      "dl",    "dt",    "div",        "figcaption", "h", "h1",
                         "h2",      "h3",      "h4",    "h5",    "h6",         "hgroup",  "html", "legend",
                         "main",    "marquee", "ol",    "p",     "section",    "summary", "title", "ul"};
    c.media_tags = {"audio", "embed", "figure", "iframe", "img", "object", "picture", "video"};
    c.extra_kept_tags = {"source"};
    c.banned_div_id_substrings = {"footer", "header", "navigation", "nav", "navbar", "menu"};
    c.banned_div_attributes = {"date"};
    c.banned_div_classes = {"footer", "site-info"};
    c.sentinel_class = "more-link";
    c.sentinel_text = std::string(kEndOfDocumentToken);
    c.retained_attributes = {"src", "href", "srcset", "data-src", "poster", "data", "id", "class", "alt", "width", "height"};
    return c;
}

void SimplifyConfig::validate() const {
    for (const auto& t : unwrap_tags) {
        if (structural_tags.count(t) || media_tags.count(t) || extra_kept_tags.count(t))
            throw Error("tag '" + t + "' is both unwrapped and kept");
    }
    if (sentinel_text.empty()) throw Error("sentinel text must be non-empty");
}

bool SimplifyConfig::kept(std::string_view tag) const {
    const std::string t(tag);
    return structural_tags.count(t) || media_tags.count(t) || extra_kept_tags.count(t);
}

namespace {

bool ascii_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

// Every whitespace run becomes "\n" if it contains a newline, else " ".
std::string condense(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (!ascii_ws(s[i])) {
            out.push_back(s[i++]);
            continue;
        }
        bool newline = false;
        while (i < s.size() && ascii_ws(s[i])) newline |= s[i++] == '\n';
        out.push_back(newline ? '\n' : ' ');
    }
    return out;
}

std::string collapse_source_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = false;
    for (char c : s) {
        if (ascii_ws(c)) {
            if (!in_ws) out.push_back(' ');
            in_ws = true;
        } else {
            out.push_back(c);
            in_ws = false;
        }
    }
    return out;
}

void merge_text_children(DomNode& node) {
    std::vector<DomNode> merged;
    merged.reserve(node.children.size());
    for (auto& c : node.children) {
        if (c.is_text() && !merged.empty() && merged.back().is_text()) {
            merged.back().text += c.text;
        } else {
            merged.push_back(std::move(c));
        }
    }
    for (auto& c : merged) {
        if (c.is_text()) c.text = condense(c.text);
    }
    node.children = std::move(merged);
}

bool is_raw(const DomNode& n) {
    return n.tag == "script" || n.tag == "style" || n.tag == "textarea";
}

void linebreaks_rec(DomNode& node) {
    if (is_raw(node)) return;
    for (auto& c : node.children) {
        if (c.is_text()) {
            c.text = collapse_source_whitespace(c.text);
        } else if (c.tag == "br") {
            c = DomNode::text_node("\n");
        } else {
            linebreaks_rec(c);
        }
    }
    merge_text_children(node);
}

void comments_rec(DomNode& node) {
    std::erase_if(node.children, [](const DomNode& c) { return c.is_comment(); });
    for (auto& c : node.children) comments_rec(c);
}

// Sentinel elements survive unwrapping and removal so the special-node step can replace them.
bool is_sentinel(const DomNode& n, const SimplifyConfig& cfg) {
    return n.is_element() && !cfg.sentinel_class.empty() && n.has_class(cfg.sentinel_class);
}

void unwrap_rec(DomNode& node, const SimplifyConfig& cfg) {
    for (auto& c : node.children) unwrap_rec(c, cfg);
    auto unwrappable = [&](const DomNode& c) {
        return c.is_element() && cfg.unwrap_tags.count(c.tag) && !is_sentinel(c, cfg);
    };
    if (std::none_of(node.children.begin(), node.children.end(), unwrappable)) return;
    std::vector<DomNode> out;
    for (auto& c : node.children) {
        if (unwrappable(c)) {
            for (auto& g : c.children) out.push_back(std::move(g));
        } else {
            out.push_back(std::move(c));
        }
    }
    node.children = std::move(out);
    merge_text_children(node);
}

void remove_rec(DomNode& node, const SimplifyConfig& cfg) {
    std::erase_if(node.children, [&](const DomNode& c) {
        if (c.is_text()) return false;
        if (!c.is_element()) return true;
        return !cfg.kept(c.tag) && !is_sentinel(c, cfg);
    });
    for (auto& c : node.children)
        if (!is_sentinel(c, cfg)) remove_rec(c, cfg);
}

bool banned_div(const DomNode& n, const SimplifyConfig& cfg) {
    if (n.tag != "div") return false;
    if (const std::string* id = n.attr("id")) {
        const std::string lid = text::ascii_lower(*id);
        for (const auto& sub : cfg.banned_div_id_substrings) {
            if (lid.find(text::ascii_lower(sub)) != std::string::npos) return true;
        }
    }
    for (const auto& a : cfg.banned_div_attributes) {
        if (n.attr(a)) return true;
    }
    for (const auto& cls : cfg.banned_div_classes) {
        if (n.has_class(cls)) return true;
    }
    return false;
}

void modify_rec(DomNode& node, const SimplifyConfig& cfg) {
    std::erase_if(node.children, [&](const DomNode& c) { return banned_div(c, cfg); });
    for (auto& c : node.children) {
        if (is_sentinel(c, cfg)) {
            c = DomNode::text_node(cfg.sentinel_text);
        } else {
            modify_rec(c, cfg);
        }
    }
}

bool is_media_leaf(const DomNode& n, const SimplifyConfig& cfg) {
    return cfg.media_tags.count(n.tag) || cfg.extra_kept_tags.count(n.tag);
}

bool whitespace_only(std::string_view s) {
    return text::trim(s).empty();
}

// One bottom-up pass; returns true when anything changed.
bool collapse_rec(DomNode& node, const SimplifyConfig& cfg) {
    bool changed = false;
    for (auto& c : node.children) changed |= collapse_rec(c, cfg);
    const auto before = node.children.size();
    std::erase_if(node.children, [&](const DomNode& c) {
        if (c.is_text()) return whitespace_only(c.text);
        return c.is_element() && c.children.empty() && !is_media_leaf(c, cfg);
    });
    changed |= node.children.size() != before;
    for (auto& c : node.children) {
        while (c.is_element() && c.children.size() == 1 && !c.children[0].is_text()) {
            DomNode only = std::move(c.children[0]);
            c = std::move(only);
            changed = true;
        }
    }
    return changed;
}

}  // namespace

DomTree convert_linebreaks(DomTree tree) {
    linebreaks_rec(tree);
    return tree;
}

DomTree strip_comments(DomTree tree) {
    comments_rec(tree);
    return tree;
}

DomTree unwrap_tags(DomTree tree, const SimplifyConfig& config) {
    unwrap_rec(tree, config);
    return tree;
}

DomTree remove_disallowed_nodes(DomTree tree, const SimplifyConfig& config) {
    remove_rec(tree, config);
    return tree;
}

DomTree modify_special_nodes(DomTree tree, const SimplifyConfig& config) {
    modify_rec(tree, config);
    return tree;
}

DomTree collapse(DomTree tree, const SimplifyConfig& config) {
    while (collapse_rec(tree, config)) {
    }
    return tree;
}

DomTree strip_attributes(DomTree tree, const SimplifyConfig& config) {
    std::erase_if(tree.attributes, [&](const auto& a) { return !config.retained_attributes.count(a.first); });
    for (auto& c : tree.children) c = strip_attributes(std::move(c), config);
    return tree;
}

DomTree simplify_tree(DomTree tree, const SimplifyConfig& config) {
    tree = convert_linebreaks(std::move(tree));
    tree = strip_comments(std::move(tree));
    tree = unwrap_tags(std::move(tree), config);
    tree = remove_disallowed_nodes(std::move(tree), config);
    tree = modify_special_nodes(std::move(tree), config);
    tree = collapse(std::move(tree), config);
    return strip_attributes(std::move(tree), config);
}

DomTree simplify(std::string_view raw_html, const SimplifyConfig& config) {
    return simplify_tree(parse_html(raw_html), config);
}

}  // namespace mmweb
