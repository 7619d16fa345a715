#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mmweb {

/// Mutable HTML tree node. Elements carry a lowercase tag; text nodes use
/// "#text", comments "#comment", the root "#document".
struct DomNode {
    std::string tag;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<DomNode> children;
    std::string text;

    static DomNode element(std::string tag, std::vector<std::pair<std::string, std::string>> attrs = {},
                           std::vector<DomNode> children = {});
    static DomNode text_node(std::string text);
    static DomNode comment(std::string text);
    static DomNode document(std::vector<DomNode> children = {});

    bool is_text() const { return tag == "#text"; }
    bool is_comment() const { return tag == "#comment"; }
    bool is_element() const { return !tag.empty() && tag[0] != '#'; }

    const std::string* attr(std::string_view name) const;
    bool has_class(std::string_view cls) const;

    bool operator==(const DomNode&) const = default;
};

/// The root of a parsed page.
using DomTree = DomNode;

/// Tolerant parse; never throws. Invalid UTF-8 decodes to U+FFFD.
DomTree parse_html(std::string_view raw_html);

/// Serializes to HTML. Newlines inside text are written as <br> so that the
/// output re-parses to an equivalent tree.
std::string serialize_html(const DomNode& node);

/// Concatenated text of all descendant text nodes.
std::string text_content(const DomNode& node);

/// Number of nodes in the subtree, including `node`.
std::size_t node_count(const DomNode& node);

}  // namespace mmweb
