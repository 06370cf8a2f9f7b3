#include "projens/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace projens
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto first = s.find_first_not_of(" \t\r\n");
            if (first == std::string::npos) {
                return {};
            }
            const auto last = s.find_last_not_of(" \t\r\n");
            return s.substr(first, last - first + 1);
        }

        template <typename T>
        T parse_integer(const std::string &key, const std::string &text)
        {
            const auto s = trim(text);
            T value{};
            const auto *end = s.data() + s.size();
            auto [ptr, ec] = std::from_chars(s.data(), end, value);
            if (s.empty() || ec != std::errc() || ptr != end) {
                throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + text + "'");
            }
            return value;
        }
    }

    std::size_t parse_size(const std::string &key, const std::string &text)
    {
        return parse_integer<std::size_t>(key, text);
    }

    std::uint64_t parse_u64(const std::string &key, const std::string &text)
    {
        return parse_integer<std::uint64_t>(key, text);
    }

    double parse_double(const std::string &key, const std::string &text)
    {
        const auto s = trim(text);
        double value = 0.0;
        const auto *end = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(s.data(), end, value);
        if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
            throw ConfigError("config key '" + key + "': expected a finite number, got '" + text + "'");
        }
        return value;
    }

    bool parse_bool(const std::string &key, const std::string &text)
    {
        const auto s = trim(text);
        if (s == "true" || s == "1" || s == "yes") {
            return true;
        }
        if (s == "false" || s == "0" || s == "no") {
            return false;
        }
        throw ConfigError("config key '" + key + "': expected true or false, got '" + text + "'");
    }

    RunConfig::RunConfig(std::vector<ConfigKey> schema) : schema_(std::move(schema))
    {
        for (const auto &k : schema_) {
            values_[k.name] = k.default_value;
        }
    }

    bool RunConfig::has_key(const std::string &key) const
    {
        return values_.count(key) > 0;
    }

    void RunConfig::set(const std::string &key, const std::string &value)
    {
        if (!has_key(key)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        values_[key] = trim(value);
    }

    void RunConfig::parse_text(const std::string &text, const std::string &origin)
    {
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.erase(hash);
            }
            line = trim(line);
            if (line.empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
            }
            const auto key = trim(line.substr(0, eq));
            if (!has_key(key)) {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown config key '" + key + "'");
            }
            set(key, line.substr(eq + 1));
        }
    }

    void RunConfig::load_file(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot read config file " + path.string());
        }
        std::stringstream buf;
        buf << in.rdbuf();
        parse_text(buf.str(), path.string());
    }

    void RunConfig::apply_overrides(std::span<const std::string> args)
    {
        for (std::size_t i = 0; i < args.size(); ++i) {
            const auto &arg = args[i];
            if (arg.rfind("--", 0) != 0 || arg.size() == 2) {
                throw ConfigError("expected --key value, got '" + arg + "'");
            }
            std::string key = arg.substr(2);
            std::string value;
            const auto eq = key.find('=');
            if (eq != std::string::npos) {
                value = key.substr(eq + 1);
                key.erase(eq);
            } else {
                if (i + 1 >= args.size()) {
                    throw ConfigError("missing value for --" + key);
                }
                value = args[++i];
            }
            if (key == "config") {
                load_file(value);
            } else {
                set(key, value);
            }
        }
    }

    const std::string &RunConfig::get(const std::string &key) const
    {
        auto it = values_.find(key);
        if (it == values_.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        return it->second;
    }

    std::size_t RunConfig::get_size(const std::string &key) const
    {
        return parse_size(key, get(key));
    }

    std::uint64_t RunConfig::get_u64(const std::string &key) const
    {
        return parse_u64(key, get(key));
    }

    double RunConfig::get_double(const std::string &key) const
    {
        return parse_double(key, get(key));
    }

    bool RunConfig::get_bool(const std::string &key) const
    {
        return parse_bool(key, get(key));
    }

    std::vector<std::string> RunConfig::get_list(const std::string &key) const
    {
        std::vector<std::string> out;
        const auto &raw = get(key);
        if (trim(raw).empty()) {
            return out;
        }
        std::stringstream in(raw);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty()) {
                throw ConfigError("config key '" + key + "': empty list element in '" + raw + "'");
            }
            out.push_back(item);
        }
        return out;
    }

    std::vector<std::size_t> RunConfig::get_size_list(const std::string &key) const
    {
        std::vector<std::size_t> out;
        for (const auto &item : get_list(key)) {
            out.push_back(parse_size(key, item));
        }
        return out;
    }

    std::vector<std::uint64_t> RunConfig::get_u64_list(const std::string &key) const
    {
        std::vector<std::uint64_t> out;
        for (const auto &item : get_list(key)) {
            out.push_back(parse_u64(key, item));
        }
        return out;
    }

    std::string RunConfig::snapshot() const
    {
        std::ostringstream out;
        for (const auto &k : schema_) {
            if (!k.help.empty()) {
                out << "# " << k.help << '\n';
            }
            out << k.name << " = " << values_.at(k.name) << '\n';
        }
        return out.str();
    }
}
