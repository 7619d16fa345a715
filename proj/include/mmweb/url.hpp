#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace mmweb {

/// Generic URI components. Absent components are distinguished from empty
/// ones because reference resolution treats them differently.
struct UrlParts {
    std::optional<std::string> scheme;
    std::optional<std::string> authority;
    std::string path;
    std::optional<std::string> query;
    std::optional<std::string> fragment;
};

UrlParts split_url(std::string_view url);
std::string join_url(const UrlParts& parts);

/// Reference resolution with dot-segment removal (RFC 3986 section 5.2).
std::string resolve_url(std::string_view base, std::string_view reference);

bool is_absolute_http_url(std::string_view url);

/// Lowercased host without userinfo or port; empty if the URL has no authority.
std::string url_host(std::string_view url);

/// Host lowercased with a leading "www." stripped. No public-suffix handling.
std::string url_domain(std::string_view url);

}  // namespace mmweb
