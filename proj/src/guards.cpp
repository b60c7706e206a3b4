#include "hatcheck/guards.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hatcheck {

Guards Guards::parse(std::string_view spec, Guards base) {
    Guards g = base;
    while (!spec.empty()) {
        const auto comma = spec.find(',');
        const std::string_view item = spec.substr(0, comma);
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        if (item.empty()) continue;

        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("guard override '" + std::string(item) + "' is not key=value");
        const std::string key(item.substr(0, eq));
        const std::string value(item.substr(eq + 1));
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size())
            throw std::invalid_argument("guard '" + key + "' has non-numeric value '" + value + "'");

        if (key == "assignments") g.assignments = v;
        else if (key == "tables") g.table_entries = v;
        else if (key == "nodes") g.solver_nodes = v;
        else if (key == "enumeration") g.enumeration = v;
        else if (key == "circumference") g.circumference_vertices = v;
        else if (key == "embedding") g.tree_embedding_nodes = v;
        else if (key == "entries") g.strategy_entries = v;
        else throw std::invalid_argument("unknown guard '" + key + "'");
    }
    return g;
}

Guards Guards::parse(std::string_view spec) { return parse(spec, Guards{}); }

Guards Guards::from_environment() {
    const char* env = std::getenv("HATCHECK_GUARDS");
    return env ? parse(env) : Guards{};
}

}  // namespace hatcheck
