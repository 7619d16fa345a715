#include "mmweb/dom.hpp"

#include <sstream>

#include "mmweb/text.hpp"

namespace mmweb {

DomNode DomNode::element(std::string tag, std::vector<std::pair<std::string, std::string>> attrs,
                         std::vector<DomNode> children) {
    DomNode n;
    n.tag = std::move(tag);
    n.attributes = std::move(attrs);
    n.children = std::move(children);
    return n;
}

DomNode DomNode::text_node(std::string text) {
    DomNode n;
    n.tag = "#text";
    n.text = std::move(text);
    return n;
}

DomNode DomNode::comment(std::string text) {
    DomNode n;
    n.tag = "#comment";
    n.text = std::move(text);
    return n;
}

DomNode DomNode::document(std::vector<DomNode> children) {
    DomNode n;
    n.tag = "#document";
    n.children = std::move(children);
    return n;
}

const std::string* DomNode::attr(std::string_view name) const {
    for (const auto& [k, v] : attributes) {
        if (k == name) return &v;
    }
    return nullptr;
}

bool DomNode::has_class(std::string_view cls) const {
    const std::string* classes = attr("class");
    if (!classes) return false;
    std::istringstream ss(*classes);
    std::string token;
    while (ss >> token) {
        if (token == cls) return true;
    }
    return false;
}

namespace {

bool is_void(std::string_view tag) {
    static constexpr std::string_view kVoid[] = {"area", "base", "br", "col", "embed", "hr", "img", "input",
                                                 "link", "meta", "param", "source", "track", "wbr"};
    for (auto v : kVoid) {
        if (v == tag) return true;
    }
    return false;
}

void escape_into(std::string& out, std::string_view s, bool attribute) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"':
                if (attribute) {
                    out += "&quot;";
                } else {
                    out.push_back(c);
                }
                break;
            default: out.push_back(c);
        }
    }
}

void serialize_into(std::string& out, const DomNode& n) {
    if (n.is_text()) {
        std::size_t start = 0;
        while (true) {
            auto nl = n.text.find('\n', start);
            escape_into(out, std::string_view(n.text).substr(start, nl == std::string::npos ? nl : nl - start), false);
            if (nl == std::string::npos) break;
            out += "<br>";
            start = nl + 1;
        }
        return;
    }
    if (n.is_comment()) {
        out += "<!--" + n.text + "-->";
        return;
    }
    if (!n.is_element()) {
        for (const auto& c : n.children) serialize_into(out, c);
        return;
    }
    out += "<" + n.tag;
    for (const auto& [k, v] : n.attributes) {
        out += " " + k + "=\"";
        escape_into(out, v, true);
        out += "\"";
    }
    out += ">";
    if (is_void(n.tag)) return;
    for (const auto& c : n.children) serialize_into(out, c);
    out += "</" + n.tag + ">";
}

void text_into(std::string& out, const DomNode& n) {
    if (n.is_text()) {
        out += n.text;
        return;
    }
    for (const auto& c : n.children) text_into(out, c);
}

}  // namespace

std::string serialize_html(const DomNode& node) {
    std::string out;
    serialize_into(out, node);
    return out;
}

std::string text_content(const DomNode& node) {
    std::string out;
    text_into(out, node);
    return out;
}

std::size_t node_count(const DomNode& node) {
    std::size_t n = 1;
    for (const auto& c : node.children) n += node_count(c);
    return n;
}

}  // namespace mmweb
