#include "l1rates/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace l1rates {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (const auto& h : header) cell(h);
    end_row();
}

void CsvWriter::separator() {
    if (pending_ == columns_) throw std::logic_error("CsvWriter: too many cells in row of " + path_);
    if (pending_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::cell(double v) {
    separator();
    out_ << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
    separator();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::cell(unsigned long long v) {
    separator();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
    separator();
    out_ << v;
    return *this;
}

void CsvWriter::end_row() {
    if (pending_ != columns_) throw std::logic_error("CsvWriter: incomplete row in " + path_);
    out_ << '\n';
    pending_ = 0;
    if (!out_) throw std::runtime_error("write to '" + path_ + "' failed");
}

}  // namespace l1rates
