#include "output.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include <json.hpp>

#include "ofr/error.hpp"

#ifndef OFR_VERSION
#define OFR_VERSION "0.0.0"
#endif

namespace ofr::cli {

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 failed");
    std::ostringstream s;
    for (unsigned i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return s.str();
}

// shortest text that reads back to the same double
std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

std::string read_all(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw IoError("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw Error("csv row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw IoError("failed writing " + path_.string());
}

RunContext::RunContext(std::filesystem::path out_dir, std::string command, std::string config_text)
    : dir_(std::move(out_dir)), command_(std::move(command)), started_(utc_now()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
    write_text("config.json", config_text);
    config_hash_ = sha256_hex(config_text);
}

std::filesystem::path RunContext::file(const std::string& name) {
    files_.push_back(name);
    return dir_ / name;
}

void RunContext::write_text(const std::string& name, const std::string& text) {
    std::ofstream out(file(name), std::ios::binary);
    out << text;
    if (!out) throw IoError("cannot write " + (dir_ / name).string());
}

void RunContext::task(const std::string& name, const std::string& status, const std::string& message) {
    tasks_.push_back({name, status, message});
}

void RunContext::finish(const std::string& status, const std::string& message) {
    nlohmann::ordered_json m;
    m["tool"] = "ofr";
    m["version"] = OFR_VERSION;
    m["command"] = command_;
    m["config_sha256"] = config_hash_;
    m["started_utc"] = started_;
    m["finished_utc"] = utc_now();
    m["status"] = status;
    if (!message.empty()) m["message"] = message;
    m["tasks"] = nlohmann::ordered_json::array();
    for (const auto& t : tasks_) {
        nlohmann::ordered_json j{{"name", t.name}, {"status", t.status}};
        if (!t.message.empty()) j["message"] = t.message;
        m["tasks"].push_back(j);
    }
    m["files"] = nlohmann::ordered_json::array();
    for (const auto& f : files_) {
        std::error_code ec;
        if (!std::filesystem::exists(dir_ / f, ec)) continue;
        m["files"].push_back({{"path", f}, {"sha256", sha256_hex(read_all(dir_ / f))}});
    }
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << m.dump(2) << '\n';
    if (!out) throw IoError("cannot write manifest in " + dir_.string());
}

}  // namespace ofr::cli
