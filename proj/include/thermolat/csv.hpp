#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

#include "thermolat/errors.hpp"

namespace thermolat {

using CsvCell = std::variant<std::string, double, long long, std::size_t>;

/// Minimal CSV writer: mandatory header, '\n' line ends, doubles at full
/// precision so deterministic runs produce byte-identical artifacts.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::initializer_list<std::string> header)
        : out_(path) {
        if (!out_) throw ConfigurationError("cannot open output file: " + path);
        bool first = true;
        for (const auto& h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << '\n';
    }

    void row(std::initializer_list<CsvCell> cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) out_ << ',';
            first = false;
            if (std::holds_alternative<std::string>(c)) {
                out_ << std::get<std::string>(c);
            } else if (std::holds_alternative<double>(c)) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(c));
                out_ << buf;
            } else if (std::holds_alternative<long long>(c)) {
                out_ << std::get<long long>(c);
            } else {
                out_ << std::get<std::size_t>(c);
            }
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

}  // namespace thermolat
