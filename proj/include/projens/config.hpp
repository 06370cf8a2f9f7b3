#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace projens
{
    /// Bad configuration or command line. Maps to exit code 2.
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct ConfigKey
    {
        std::string name;
        std::string default_value;
        std::string help;
    };

    /// Flat key = value configuration with a fixed set of known keys.
    ///
    /// Files hold one `key = value` per line; `#` starts a comment. Command
    /// line overrides use `--key value`. Unknown keys are rejected.
    class RunConfig
    {
    public:
        explicit RunConfig(std::vector<ConfigKey> schema);

        void load_file(const std::filesystem::path &path);
        void parse_text(const std::string &text, const std::string &origin = "<text>");
        /// Consumes `--key value` pairs; `--config path` loads a file in place.
        void apply_overrides(std::span<const std::string> args);
        void set(const std::string &key, const std::string &value);

        bool has_key(const std::string &key) const;
        const std::string &get(const std::string &key) const;
        std::size_t get_size(const std::string &key) const;
        std::uint64_t get_u64(const std::string &key) const;
        double get_double(const std::string &key) const;
        bool get_bool(const std::string &key) const;
        /// Comma-separated list; empty string gives an empty list.
        std::vector<std::string> get_list(const std::string &key) const;
        std::vector<std::size_t> get_size_list(const std::string &key) const;
        std::vector<std::uint64_t> get_u64_list(const std::string &key) const;

        const std::vector<ConfigKey> &schema() const { return schema_; }
        /// Every key in schema order, resolved, as a loadable config file.
        std::string snapshot() const;

    private:
        std::vector<ConfigKey> schema_;
        std::map<std::string, std::string> values_;
    };

    std::size_t parse_size(const std::string &key, const std::string &text);
    std::uint64_t parse_u64(const std::string &key, const std::string &text);
    double parse_double(const std::string &key, const std::string &text);
    bool parse_bool(const std::string &key, const std::string &text);
}
