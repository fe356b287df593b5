#include "forge/classfile.hpp"

#include <cctype>

namespace forge {

namespace {

constexpr std::uint16_t kAccInterface = 0x0200;
constexpr std::uint16_t kAccAbstract = 0x0400;
constexpr std::uint16_t kAccModule = 0x8000;
constexpr std::uint16_t kAccAnnotation = 0x2000;

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::uint8_t u1() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint16_t u2() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
        pos_ += 2;
        return v;
    }
    std::uint32_t u4() {
        need(4);
        std::uint32_t v = (static_cast<std::uint32_t>(bytes_[pos_]) << 24) |
                          (static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 16) |
                          (static_cast<std::uint32_t>(bytes_[pos_ + 2]) << 8) |
                          static_cast<std::uint32_t>(bytes_[pos_ + 3]);
        pos_ += 4;
        return v;
    }
    std::string utf(std::size_t len) {
        need(len);
        std::string s(reinterpret_cast<const char*>(&bytes_[pos_]), len);
        pos_ += len;
        return s;
    }
    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }

private:
    void need(std::size_t n) {
        if (pos_ + n > bytes_.size()) throw ClassParseError("truncated class file");
    }
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

bool has_synthetic_segment(const std::string& binary_name) {
    // Outer$1, Outer$1Local: a digit right after '$' marks a compiler name.
    for (std::size_t i = 0; i + 1 < binary_name.size(); ++i) {
        if (binary_name[i] == '$' &&
            std::isdigit(static_cast<unsigned char>(binary_name[i + 1])))
            return true;
    }
    return false;
}

}  // namespace

ClassInfo parse_class_file(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    if (r.u4() != 0xCAFEBABEu) throw ClassParseError("bad magic");
    r.u2();  // minor
    r.u2();  // major

    std::uint16_t cp_count = r.u2();
    std::vector<std::string> utf8(cp_count);
    std::vector<std::uint16_t> class_name_index(cp_count, 0);

    for (std::uint16_t i = 1; i < cp_count; ++i) {
        std::uint8_t tag = r.u1();
        switch (tag) {
            case 1: {  // Utf8
                std::uint16_t len = r.u2();
                utf8[i] = r.utf(len);
                break;
            }
            case 7:  // Class
                class_name_index[i] = r.u2();
                break;
            case 8:   // String
            case 16:  // MethodType
            case 19:  // Module
            case 20:  // Package
                r.skip(2);
                break;
            case 15:  // MethodHandle
                r.skip(3);
                break;
            case 3:   // Integer
            case 4:   // Float
            case 9:   // Fieldref
            case 10:  // Methodref
            case 11:  // InterfaceMethodref
            case 12:  // NameAndType
            case 17:  // Dynamic
            case 18:  // InvokeDynamic
                r.skip(4);
                break;
            case 5:  // Long
            case 6:  // Double
                r.skip(8);
                ++i;  // occupies two constant pool slots
                break;
            default:
                throw ClassParseError("unknown constant pool tag " + std::to_string(tag));
        }
    }

    ClassInfo info;
    std::uint16_t access = r.u2();
    std::uint16_t this_class = r.u2();
    if (this_class >= cp_count || class_name_index[this_class] == 0 ||
        class_name_index[this_class] >= cp_count)
        throw ClassParseError("bad this_class reference");
    info.binary_name = utf8[class_name_index[this_class]];
    info.is_interface = (access & (kAccInterface | kAccAnnotation)) != 0;
    info.is_abstract = (access & kAccAbstract) != 0 && !info.is_interface;
    info.is_module_info = (access & kAccModule) != 0 || info.binary_name == "module-info";
    info.is_synthetic_name = has_synthetic_segment(info.binary_name);

    info.fqn = info.binary_name;
    for (char& c : info.fqn)
        if (c == '/' || c == '$') c = '.';

    r.u2();  // super_class
    std::uint16_t interfaces = r.u2();
    r.skip(static_cast<std::size_t>(interfaces) * 2);

    auto read_members = [&](std::set<std::string>& names) {
        std::uint16_t count = r.u2();
        for (std::uint16_t i = 0; i < count; ++i) {
            r.u2();  // access
            std::uint16_t name_idx = r.u2();
            r.u2();  // descriptor
            if (name_idx < cp_count && !utf8[name_idx].empty()) names.insert(utf8[name_idx]);
            std::uint16_t attrs = r.u2();
            for (std::uint16_t a = 0; a < attrs; ++a) {
                r.u2();
                std::uint32_t len = r.u4();
                r.skip(len);
            }
        }
    };
    read_members(info.fields);
    read_members(info.methods);
    info.methods.erase("<init>");
    info.methods.erase("<clinit>");

    return info;
}

}  // namespace forge
