#include "quadl/ddreal.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace quadl {

std::string to_string(const DD& a, int digits) {
    if (std::isnan(a.hi)) return "nan";
    if (std::isinf(a.hi)) return a.hi > 0 ? "inf" : "-inf";
    if (a.hi == 0.0) return "0";
    DD x = abs(a);
    int e = static_cast<int>(std::floor(std::log10(x.hi)));
    x = x / powi(DD(10.0), e);
    while (x.hi >= 10.0) { x = x / 10.0; ++e; }
    while (x.hi < 1.0) { x = x * 10.0; --e; }
    std::string mant;
    for (int i = 0; i < digits + 1; ++i) {
        int d = static_cast<int>(std::floor(x.hi));
        if (d > 9) d = 9;
        if (d < 0) d = 0;
        mant.push_back(static_cast<char>('0' + d));
        x = (x - static_cast<double>(d)) * 10.0;
    }
    // round on the extra digit
    if (mant.back() >= '5') {
        int i = digits - 1;
        while (i >= 0 && mant[i] == '9') mant[i--] = '0';
        if (i < 0) { mant.insert(mant.begin(), '1'); ++e; }
        else ++mant[i];
    }
    mant.resize(digits);
    std::string out = a.hi < 0 ? "-" : "";
    out += mant[0];
    out += '.';
    out += mant.substr(1);
    char buf[16];
    std::snprintf(buf, sizeof buf, "e%+d", e);
    return out + buf;
}

DD dd_from_string(const std::string& s) {
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    DD m(0.0);
    int scale = 0, ndig = 0;
    bool point = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            m = m * 10.0 + static_cast<double>(c - '0');
            if (point) --scale;
            ++ndig;
        } else if (c == '.' && !point) {
            point = true;
        } else {
            break;
        }
    }
    if (ndig == 0) throw std::invalid_argument("not a number: " + s);
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) scale += std::stoi(s.substr(i + 1));
    if (scale > 0) m = m * powi(DD(10.0), scale);
    if (scale < 0) m = m / powi(DD(10.0), -scale);
    return neg ? -m : m;
}

}  // namespace quadl
