#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

struct ClassParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClassInfo {
    std::string binary_name;  // e.g. org/joda/time/Duration (slashes)
    std::string fqn;          // dot-separated; nested classes use dots too
    bool is_interface = false;
    bool is_abstract = false;
    bool is_module_info = false;
    bool is_synthetic_name = false;  // anonymous/local class (Outer$1...)
    std::set<std::string> methods;
    std::set<std::string> fields;

    bool concrete_class() const {
        return !is_interface && !is_abstract && !is_module_info && !is_synthetic_name;
    }
};

/// Parse one JVM class file: magic, constant pool, access flags, member
/// name tables. Only metadata needed for the knowledge base is kept.
ClassInfo parse_class_file(const std::vector<std::uint8_t>& bytes);

}  // namespace forge
