#include "leadnet/types.hpp"

#include <algorithm>
#include <cctype>

namespace leadnet {

std::string_view to_string(Role role) {
    switch (role) {
        case Role::manager: return "manager";
        case Role::director: return "director";
        case Role::consultant: return "consultant";
        case Role::senior_consultant: return "senior_consultant";
        case Role::partner: return "partner";
        case Role::external: return "external";
        case Role::unknown: break;
    }
    return "unknown";
}

std::string_view to_string(Gender gender) {
    switch (gender) {
        case Gender::male: return "0";
        case Gender::female: return "1";
        case Gender::unknown: break;
    }
    return "unknown";
}

Role parse_role(std::string_view text) {
    std::string key;
    key.reserve(text.size());
    for (char c : text) {
        if (c == ' ' || c == '-') {
            c = '_';
        }
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    // trim underscores introduced by padding
    while (!key.empty() && key.front() == '_') key.erase(key.begin());
    while (!key.empty() && key.back() == '_') key.pop_back();

    if (key == "manager") return Role::manager;
    if (key == "director") return Role::director;
    if (key == "consultant") return Role::consultant;
    if (key == "senior_consultant") return Role::senior_consultant;
    if (key == "partner") return Role::partner;
    if (key == "external") return Role::external;
    return Role::unknown;
}

Gender parse_gender(std::string_view text) {
    if (text == "0" || text == "male" || text == "m" || text == "M") return Gender::male;
    if (text == "1" || text == "female" || text == "f" || text == "F") return Gender::female;
    return Gender::unknown;
}

std::string to_string(const Diagnostic& diagnostic) {
    if (diagnostic.line == 0) {
        return diagnostic.message;
    }
    return diagnostic.message + " at line " + std::to_string(diagnostic.line);
}

}  // namespace leadnet
