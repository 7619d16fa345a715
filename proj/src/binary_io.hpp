#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "mmweb/text.hpp"

namespace mmweb::detail {

class BinaryWriter {
public:
    template <typename T>
    void put(T v) {
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        out_.append(buf, sizeof(T));
    }
    void put_string(std::string_view s) {
        put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
        out_.append(s);
    }
    void raw(std::string_view s) { out_.append(s); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class BinaryReader {
public:
    explicit BinaryReader(std::string_view in) : in_(in) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, in_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    std::string get_string() {
        auto n = get<std::uint32_t>();
        need(n);
        std::string s(in_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    void expect(std::string_view magic) {
        need(magic.size());
        if (in_.substr(pos_, magic.size()) != magic) throw Error("bad magic in model file");
        pos_ += magic.size();
    }
    bool done() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > in_.size()) throw Error("truncated model file");
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

}  // namespace mmweb::detail
