#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "squab/cellulation.h"

namespace squab {

/// Cellulation file (`.squab.json`) parse failure.
///
/// `code` is a stable identifier (`syntax`, `schema`, `duplicate-id`,
/// `unknown-field`, `edge-map`, `version`); `field` is a JSON-pointer-like
/// path to the offending value and `line` is 1-based (0 when unknown).
class FormatError : public std::runtime_error {
public:
    FormatError(std::string code, std::string field, std::size_t line, const std::string& message);

    const std::string& code() const { return code_; }
    const std::string& field() const { return field_; }
    std::size_t line() const { return line_; }

private:
    std::string code_;
    std::string field_;
    std::size_t line_;
};

struct LoadOptions {
    /// Reject fields outside the schema (including UI `layout` blocks).
    bool strict = false;
};

/// Parsed file contents. Ids are renumbered densely in ascending id order.
struct LoadedSurface {
    Surface surface;
    std::optional<DualSurface> explicit_dual;

    /// The explicit dual when present, otherwise derive_dual(surface).
    DualSurface resolve_dual() const;
    /// Validates the surface and pairs it with resolve_dual().
    SurfaceCode to_code() const;
};

LoadedSurface load_surface(std::string_view payload, const LoadOptions& options = {});
LoadedSurface load_surface_file(const std::string& path, const LoadOptions& options = {});

/// Canonical compact JSON (sorted keys, dense ids) followed by a newline.
std::string save_surface(const Surface& s, const DualSurface* dual = nullptr);
inline std::string save_code(const SurfaceCode& code) { return save_surface(code.surface, &code.dual); }

void write_text_file(const std::string& path, std::string_view contents);

}  // namespace squab
