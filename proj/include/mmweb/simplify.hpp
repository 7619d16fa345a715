#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mmweb/dom.hpp"

namespace mmweb {

inline constexpr std::string_view kEndOfDocumentToken = "END_OF_DOCUMENT_TOKEN_TO_BE_REPLACED";

struct SimplifyConfig {
    std::set<std::string> unwrap_tags;
    std::set<std::string> structural_tags;
    std::set<std::string> media_tags;
    /// Always kept in addition to the structural and media sets.
    std::set<std::string> extra_kept_tags;
    std::vector<std::string> banned_div_id_substrings;
    std::vector<std::string> banned_div_attributes;
    std::vector<std::string> banned_div_classes;
    std::string sentinel_class;
    std::string sentinel_text;
    std::set<std::string> retained_attributes;

    static SimplifyConfig defaults();
    /// Throws Error if the unwrap set intersects a keep set.
    void validate() const;
    bool kept(std::string_view tag) const;
};

DomTree convert_linebreaks(DomTree tree);
DomTree strip_comments(DomTree tree);
DomTree unwrap_tags(DomTree tree, const SimplifyConfig& config);
DomTree remove_disallowed_nodes(DomTree tree, const SimplifyConfig& config);
DomTree modify_special_nodes(DomTree tree, const SimplifyConfig& config);
/// Drops empty leaves and replaces textless single-child parents by their
/// child, to a fixpoint. Media elements are never treated as empty leaves.
DomTree collapse(DomTree tree, const SimplifyConfig& config = SimplifyConfig::defaults());
DomTree strip_attributes(DomTree tree, const SimplifyConfig& config);

/// parse -> linebreaks -> comments -> unwrap -> remove -> modify -> collapse
/// -> attribute stripping.
DomTree simplify(std::string_view raw_html, const SimplifyConfig& config = SimplifyConfig::defaults());
DomTree simplify_tree(DomTree tree, const SimplifyConfig& config = SimplifyConfig::defaults());

}  // namespace mmweb
