#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace ofr::cli {

std::string sha256_hex(std::string_view data);
std::string format_number(double x);

// Comma separated, LF line endings, header row first.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

struct TaskRecord {
    std::string name;
    std::string status;  // ok | failed
    std::string message;
};

// Collects everything a run produced and writes manifest.json next to it.
class RunContext {
public:
    RunContext(std::filesystem::path out_dir, std::string command, std::string config_text);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path file(const std::string& name);  // registers the output
    void write_text(const std::string& name, const std::string& text);
    void task(const std::string& name, const std::string& status, const std::string& message = {});
    void finish(const std::string& status, const std::string& message = {});

private:
    std::filesystem::path dir_;
    std::string command_;
    std::string config_hash_;
    std::string started_;
    std::vector<std::string> files_;
    std::vector<TaskRecord> tasks_;
};

}  // namespace ofr::cli
