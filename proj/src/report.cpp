#include "hpcsocial/report.hpp"

#include "hpcsocial/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <system_error>

namespace hpcsocial {

namespace fs = std::filesystem;

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), ptr);
    if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string format_fixed(double v, int decimals) {
    std::array<char, 64> buf{};
    auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, decimals);
    return std::string(buf.data(), ptr);
}

void write_matrix_csv(std::ostream& out, const SimMatrix& m) {
    out << "user";
    for (const auto& u : m.users()) out << ',' << u;
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << m.users()[i];
        for (std::size_t j = 0; j < m.size(); ++j) out << ',' << format_fixed(m.value(i, j), 6);
        out << '\n';
    }
}

nlohmann::json matrix_to_json(const SimMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m.value(i, j));
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"users", m.users()}, {"m", std::move(rows)}};
}

void write_edges_csv(std::ostream& out, const FollowerGraph& g) {
    out << "follower,dominant,fraction\n";
    for (const auto& e : g.edges) {
        out << g.users[e.follower] << ',' << g.users[e.dominant] << ','
            << format_fixed(e.share.value(), 6) << '\n';
    }
}

void write_counts_csv(std::ostream& out, const std::vector<std::string>& users,
                      const std::vector<std::size_t>& counts) {
    out << "user,followers\n";
    for (std::size_t j = 0; j < users.size(); ++j) {
        out << users[j] << ',' << std::to_string(counts[j]) << '\n';
    }
}

void write_distribution_csv(std::ostream& out, const FollowerDistribution& d) {
    out << "k,p\n";
    for (std::size_t i = 0; i < d.k.size(); ++i) {
        out << std::to_string(d.k[i]) << ',' << format_number(d.p[i]) << '\n';
    }
}

nlohmann::json fit_to_json(const PowerLawFit& fit) {
    return nlohmann::json{{"a", fit.a}, {"b", fit.b}, {"r2", fit.r2}, {"support", fit.support}};
}

void write_cdf_csv(std::ostream& out, const EmpiricalCdf& cdf) {
    out << "gap_seconds,cum_fraction\n";
    for (std::size_t i = 0; i < cdf.values.size(); ++i) {
        out << std::to_string(cdf.values[i]) << ',' << format_number(cdf.fractions[i]) << '\n';
    }
}

void write_series_csv(std::ostream& out, const ConvergenceSeries& s) {
    out << "fraction,jobs,cosine,users\n";
    for (const auto& p : s.points) {
        out << format_number(p.fraction) << ',' << std::to_string(p.jobs) << ','
            << format_number(p.cosine) << ',' << std::to_string(p.users) << '\n';
    }
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
        h >>= 4;
    }
    return out;
}

void OutputBundle::add(std::string name, std::string contents) {
    files_.emplace_back(std::move(name), std::move(contents));
}

void OutputBundle::add_json(std::string name, const nlohmann::json& j) {
    add(std::move(name), j.dump(2) + "\n");
}

const std::string& OutputBundle::at(const std::string& name) const {
    for (const auto& [n, c] : files_) {
        if (n == name) return c;
    }
    throw std::out_of_range("no output named '" + name + "'");
}

bool OutputBundle::contains(const std::string& name) const {
    for (const auto& [n, _] : files_) {
        if (n == name) return true;
    }
    return false;
}

void OutputBundle::commit(const fs::path& dir) const {
    const fs::path target = fs::weakly_canonical(fs::absolute(dir.empty() ? fs::path(".") : dir));
    const fs::path staging = target.parent_path() / ("." + target.filename().string() + ".staging");
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    fs::remove_all(staging, ec);
    try {
        fs::create_directories(staging);
        for (const auto& [name, contents] : files_) {
            std::ofstream f(staging / name, std::ios::binary);
            f << contents;
            if (!f) throw Error("failed writing '" + (staging / name).string() + "'");
        }
        fs::create_directories(target);
        for (const auto& [name, _] : files_) fs::rename(staging / name, target / name);
        fs::remove_all(staging, ec);
    } catch (...) {
        fs::remove_all(staging, ec);
        throw;
    }
}

}  // namespace hpcsocial
