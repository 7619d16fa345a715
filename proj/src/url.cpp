#include "mmweb/url.hpp"

#include "mmweb/text.hpp"

#include <cctype>

namespace mmweb {

namespace {

std::string remove_dot_segments(std::string_view input) {
    std::string in(input);
    std::string out;
    while (!in.empty()) {
        if (in.starts_with("../")) {
            in.erase(0, 3);
        } else if (in.starts_with("./")) {
            in.erase(0, 2);
        } else if (in.starts_with("/./")) {
            in.erase(0, 2);
        } else if (in == "/.") {
            in = "/";
        } else if (in.starts_with("/../") || in == "/..") {
            in = in.size() == 3 ? std::string("/") : in.substr(3);
            auto slash = out.rfind('/');
            out.erase(slash == std::string::npos ? 0 : slash);
        } else if (in == "." || in == "..") {
            in.clear();
        } else {
            std::size_t start = in[0] == '/' ? 1 : 0;
            std::size_t next = in.find('/', start);
            if (next == std::string::npos) next = in.size();
            out.append(in, 0, next);
            in.erase(0, next);
        }
    }
    return out;
}

std::string merge_paths(const UrlParts& base, std::string_view ref_path) {
    if (base.authority && base.path.empty()) return "/" + std::string(ref_path);
    auto slash = base.path.rfind('/');
    if (slash == std::string::npos) return std::string(ref_path);
    return base.path.substr(0, slash + 1) + std::string(ref_path);
}

bool valid_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
    }
    return true;
}

}  // namespace

UrlParts split_url(std::string_view url) {
    UrlParts parts;
    if (auto hash = url.find('#'); hash != std::string_view::npos) {
        parts.fragment = std::string(url.substr(hash + 1));
        url = url.substr(0, hash);
    }
    if (auto q = url.find('?'); q != std::string_view::npos) {
        parts.query = std::string(url.substr(q + 1));
        url = url.substr(0, q);
    }
    if (auto colon = url.find(':'); colon != std::string_view::npos) {
        auto first_slash = url.find('/');
        if ((first_slash == std::string_view::npos || colon < first_slash) && valid_scheme(url.substr(0, colon))) {
            parts.scheme = text::ascii_lower(url.substr(0, colon));
            url = url.substr(colon + 1);
        }
    }
    if (url.starts_with("//")) {
        url = url.substr(2);
        auto end = url.find('/');
        if (end == std::string_view::npos) end = url.size();
        parts.authority = std::string(url.substr(0, end));
        url = url.substr(end);
    }
    parts.path = std::string(url);
    return parts;
}

std::string join_url(const UrlParts& p) {
    std::string out;
    if (p.scheme) out += *p.scheme + ":";
    if (p.authority) out += "//" + *p.authority;
    out += p.path;
    if (p.query) out += "?" + *p.query;
    if (p.fragment) out += "#" + *p.fragment;
    return out;
}

std::string resolve_url(std::string_view base_url, std::string_view reference) {
    const UrlParts base = split_url(base_url);
    const UrlParts ref = split_url(text::trim(reference));
    UrlParts target;
    if (ref.scheme) {
        target.scheme = ref.scheme;
        target.authority = ref.authority;
        target.path = remove_dot_segments(ref.path);
        target.query = ref.query;
    } else {
        if (ref.authority) {
            target.authority = ref.authority;
            target.path = remove_dot_segments(ref.path);
            target.query = ref.query;
        } else {
            if (ref.path.empty()) {
                target.path = base.path;
                target.query = ref.query ? ref.query : base.query;
            } else {
                if (ref.path.starts_with('/')) {
                    target.path = remove_dot_segments(ref.path);
                } else {
                    target.path = remove_dot_segments(merge_paths(base, ref.path));
                }
                target.query = ref.query;
            }
            target.authority = base.authority;
        }
        target.scheme = base.scheme;
    }
    target.fragment = ref.fragment;
    return join_url(target);
}

bool is_absolute_http_url(std::string_view url) {
    const UrlParts p = split_url(url);
    return p.scheme && (*p.scheme == "http" || *p.scheme == "https") && p.authority &&
           !url_host(url).empty();
}

std::string url_host(std::string_view url) {
    const UrlParts p = split_url(url);
    if (!p.authority) return {};
    std::string_view host = *p.authority;
    if (auto at = host.rfind('@'); at != std::string_view::npos) host = host.substr(at + 1);
    if (host.starts_with('[')) {
        auto close = host.find(']');
        return text::ascii_lower(host.substr(0, close == std::string_view::npos ? host.size() : close + 1));
    }
    if (auto colon = host.find(':'); colon != std::string_view::npos) host = host.substr(0, colon);
    return text::ascii_lower(host);
}

std::string url_domain(std::string_view url) {
    std::string host = url_host(url);
    if (host.starts_with("www.")) host.erase(0, 4);
    return host;
}

}  // namespace mmweb
