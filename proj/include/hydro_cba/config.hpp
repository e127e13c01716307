#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hydro_cba {

inline constexpr const char* kConfigEnvVar = "HYDRO_CBA_CONFIG";

/// Flat `section.key -> value` settings for one pipeline run.
///
/// Every key the engine understands has a default; setting a key that is not
/// in that list fails with UnknownParameter. File paths under `inputs.` are
/// resolved against the directory of the config file they came from.
class RunConfig {
public:
    RunConfig();

    /// Parses `[section]` headers and `key = value` lines; `#` and `;` start
    /// comments.
    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig parse(std::string_view text, const std::filesystem::path& base_dir = ".");

    void set(const std::string& key, const std::string& value);
    bool known(const std::string& key) const noexcept;

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    /// Unset when the value is empty or "none".
    std::optional<double> get_optional_double(const std::string& key) const;
    std::filesystem::path get_path(const std::string& key) const;

    const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
    void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

    /// Checks value ranges and year ordering. File existence is checked when
    /// each file is opened.
    void validate() const;

    const std::map<std::string, std::string>& values() const noexcept { return values_; }
    static std::vector<std::string> known_keys();

private:
    std::map<std::string, std::string> values_;
    std::filesystem::path base_dir_ = ".";
};

} // namespace hydro_cba
