#include "topoclust/ensemble_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "topoclust/errors.hpp"
#include "topoclust/format.hpp"

namespace fs = std::filesystem;

namespace topoclust {

namespace {

constexpr const char* kFieldMagic = "SFIELD 1";
constexpr const char* kDiagramHeader =
    "birth,death,btype,b_x,b_y,b_z,d_x,d_y,d_z,pair_class";
constexpr const char* kManifestName = "ensemble.txt";



std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> read_lines(const fs::path& path) {
    if (!fs::exists(path))
        throw MissingPath("no such file: " + path.string());
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string() + " for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (in.bad())
        throw IoError("read failure on " + path.string());
    return lines;
}

double parse_double(const std::string& token, const fs::path& file, int line) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first; // from_chars rejects a leading +
    double value = 0.0;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError(file.string(), line,
                         "'" + token + "' is not a real number");
    return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::ofstream open_for_write(const fs::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void finish_write(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out)
        throw IoError("write failure on " + path.string());
}

// Parses "keyword a b c" where each of a, b, c satisfies `parse`.
template <typename T, typename Parse>
std::array<T, 3> parse_triple(const std::string& line, const std::string& keyword,
                              const fs::path& file, int lineno, Parse parse) {
    std::istringstream iss(line);
    std::string word;
    iss >> word;
    if (word != keyword)
        throw ParseError(file.string(), lineno,
                         "expected '" + keyword + " ...', got '" + line + "'");
    std::array<T, 3> out{};
    for (int a = 0; a < 3; ++a) {
        std::string token;
        if (!(iss >> token))
            throw ParseError(file.string(), lineno,
                             "'" + keyword + "' needs three values");
        out[a] = parse(token);
    }
    std::string extra;
    if (iss >> extra)
        throw ParseError(file.string(), lineno,
                         "trailing content after '" + keyword + "' values");
    return out;
}

} // namespace

// ----- scalar fields -----------------------------------------------------

ScalarField load_field(const fs::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || trim(lines[0]) != kFieldMagic)
        throw ParseError(path.string(), 1,
                         std::string("expected '") + kFieldMagic + "' header");
    if (lines.size() < 4)
        throw ParseError(path.string(), int(lines.size()),
                         "truncated header (need dims/spacing/origin lines)");

    ScalarField field;
    field.name = path.stem().string();
    field.dims = parse_triple<int>(
        lines[1], "dims", path, 2, [&](const std::string& t) {
            int v = 0;
            const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
            if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
                throw ParseError(path.string(), 2,
                                 "'" + t + "' is not an integer");
            return v;
        });
    const auto sp = parse_triple<double>(
        lines[2], "spacing", path, 3,
        [&](const std::string& t) { return parse_double(t, path, 3); });
    const auto og = parse_triple<double>(
        lines[3], "origin", path, 4,
        [&](const std::string& t) { return parse_double(t, path, 4); });
    field.spacing = Eigen::Vector3d(sp[0], sp[1], sp[2]);
    field.origin = Eigen::Vector3d(og[0], og[1], og[2]);

    for (int d : field.dims)
        if (d < 1)
            throw ParseError(path.string(), 2, "dims must all be >= 1");

    const std::int64_t n = field.size();
    field.values.resize(n);
    std::int64_t count = 0;
    for (std::size_t l = 4; l < lines.size(); ++l) {
        std::istringstream iss(lines[l]);
        std::string token;
        while (iss >> token) {
            if (count >= n)
                throw ParseError(path.string(), int(l + 1),
                                 "more values than dims admit (" +
                                     std::to_string(n) + ")");
            field.values[count++] = parse_double(token, path, int(l + 1));
        }
    }
    if (count != n)
        throw ParseError(path.string(), int(lines.size()),
                         "expected " + std::to_string(n) + " values, found " +
                             std::to_string(count));
    field.validate();
    return field;
}

void save_field(const ScalarField& field, const fs::path& path) {
    field.validate();
    std::ofstream out = open_for_write(path);
    out << kFieldMagic << '\n';
    out << "dims " << field.dims[0] << ' ' << field.dims[1] << ' '
        << field.dims[2] << '\n';
    out << "spacing " << format_double(field.spacing.x()) << ' '
        << format_double(field.spacing.y()) << ' ' << format_double(field.spacing.z())
        << '\n';
    out << "origin " << format_double(field.origin.x()) << ' '
        << format_double(field.origin.y()) << ' ' << format_double(field.origin.z())
        << '\n';
    // One grid row (nx values) per line keeps files diffable.
    const int nx = field.nx();
    for (std::int64_t v = 0; v < field.size(); ++v) {
        out << format_double(field.values[v]);
        out << ((v % nx == nx - 1) ? '\n' : ' ');
    }
    finish_write(out, path);
}

// ----- ensembles ---------------------------------------------------------

namespace {

Ensemble load_from_manifest(const fs::path& manifest, const fs::path& base) {
    Ensemble ensemble;
    const std::vector<std::string> lines = read_lines(manifest);
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const std::string line = trim(lines[l]);
        if (line.empty()) continue;
        if (line[0] == '#') {
            // "# key=value" lines carry metadata; other comments are skipped.
            const std::string body = trim(line.substr(1));
            const std::size_t eq = body.find('=');
            if (eq != std::string::npos && eq > 0) {
                const std::string key = trim(body.substr(0, eq));
                const std::string value = trim(body.substr(eq + 1));
                if (!key.empty()) ensemble.metadata[key] = value;
            }
            continue;
        }
        ensemble.members.push_back(load_field(base / line));
    }
    if (ensemble.members.empty())
        throw EmptyInput("manifest " + manifest.string() +
                         " lists no member files");
    ensemble.validate();
    return ensemble;
}

} // namespace

Ensemble load_ensemble(const fs::path& path) {
    if (!fs::exists(path))
        throw MissingPath("no such file or directory: " + path.string());
    if (fs::is_directory(path)) {
        const fs::path manifest = path / kManifestName;
        if (fs::exists(manifest)) return load_from_manifest(manifest, path);
        // No manifest: take every .sfield in deterministic filename order.
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".sfield")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.empty())
            throw EmptyInput("directory " + path.string() +
                             " contains no .sfield files");
        Ensemble ensemble;
        for (const fs::path& f : files)
            ensemble.members.push_back(load_field(f));
        ensemble.validate();
        return ensemble;
    }
    return load_from_manifest(path, path.parent_path());
}

void save_ensemble(const Ensemble& ensemble, const fs::path& dir) {
    ensemble.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory " + dir.string() + ": " +
                      ec.message());

    std::vector<std::string> filenames;
    for (std::size_t m = 0; m < ensemble.members.size(); ++m) {
        std::string name = ensemble.members[m].name;
        if (name.empty()) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "member_%03zu", m);
            name = buf;
        }
        filenames.push_back(name + ".sfield");
    }
    for (std::size_t m = 0; m < filenames.size(); ++m)
        for (std::size_t o = m + 1; o < filenames.size(); ++o)
            if (filenames[m] == filenames[o])
                throw InvalidParameter("duplicate member name '" +
                                       filenames[m] + "'");

    for (std::size_t m = 0; m < ensemble.members.size(); ++m)
        save_field(ensemble.members[m], dir / filenames[m]);

    std::ofstream out = open_for_write(dir / kManifestName);
    for (const auto& [key, value] : ensemble.metadata)
        out << "# " << key << '=' << value << '\n';
    for (const std::string& f : filenames) out << f << '\n';
    finish_write(out, dir / kManifestName);
}

// ----- persistence diagrams ----------------------------------------------

PersistenceDiagram load_diagram(const fs::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || trim(lines[0]) != kDiagramHeader)
        throw ParseError(path.string(), 1,
                         std::string("expected header '") + kDiagramHeader +
                             "'");
    PersistenceDiagram diagram;
    diagram.source_name = path.stem().string();
    bool family_set = false;
    int globals = 0;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const std::string line = trim(lines[l]);
        if (line.empty()) continue;
        const int lineno = int(l + 1);
        const std::vector<std::string> cols = split(line, ',');
        if (cols.size() != 10)
            throw ParseError(path.string(), lineno,
                             "expected 10 comma-separated columns, got " +
                                 std::to_string(cols.size()));
        DiagramPoint p;
        p.birth = parse_double(trim(cols[0]), path, lineno);
        p.death = parse_double(trim(cols[1]), path, lineno);
        Family row_family;
        try {
            row_family = family_from_string(trim(cols[2]));
            p.pair_class = pair_class_from_string(trim(cols[9]));
        } catch (const InvalidParameter& e) {
            throw ParseError(path.string(), lineno, e.what());
        }
        for (int a = 0; a < 3; ++a) {
            p.birth_location[a] = parse_double(trim(cols[3 + a]), path, lineno);
            p.death_location[a] = parse_double(trim(cols[6 + a]), path, lineno);
        }
        if (!std::isfinite(p.birth) || !std::isfinite(p.death))
            throw ParseError(path.string(), lineno,
                             "birth/death must be finite");
        if (p.death < p.birth)
            throw ParseError(path.string(), lineno, "death < birth");
        if (family_set && row_family != diagram.family)
            throw ParseError(path.string(), lineno,
                             "rows mix 'min' and 'max' family tags");
        diagram.family = row_family;
        family_set = true;
        if (p.pair_class == PairClass::global_pair && ++globals > 1)
            throw ParseError(path.string(), lineno,
                             "more than one global pair");
        diagram.points.push_back(std::move(p));
    }
    return diagram;
}

void save_diagram(const PersistenceDiagram& diagram, const fs::path& path) {
    diagram.validate();
    std::ofstream out = open_for_write(path);
    out << kDiagramHeader << '\n';
    const char* btype = diagram.family == Family::minima ? "min" : "max";
    for (const DiagramPoint& p : diagram.points) {
        out << format_double(p.birth) << ',' << format_double(p.death) << ','
            << btype;
        for (int a = 0; a < 3; ++a) out << ',' << format_double(p.birth_location[a]);
        for (int a = 0; a < 3; ++a) out << ',' << format_double(p.death_location[a]);
        out << ',' << to_string(p.pair_class) << '\n';
    }
    finish_write(out, path);
}

// ----- synthetic ensembles ----------------------------------------------

namespace {

struct Bump {
    double cx, cy, amplitude, sigma;
};

// Five fixed layouts with pairwise distinct bump counts (8, 10, 12, 9, 11).
// Amplitudes span [3, 12] and widths [0.045, 0.07]; neighboring bumps are
// placed far enough apart that every one remains a separate maximum under
// modest additive noise.
const std::vector<std::vector<Bump>>& bump_patterns() {
    static const std::vector<std::vector<Bump>> kPatterns = {
        // 8 bumps: 3x3 lattice minus the center
        {{0.20, 0.20, 12.0, 0.060}, {0.50, 0.20, 6.5, 0.055},
         {0.80, 0.20, 9.0, 0.070}, {0.20, 0.50, 5.0, 0.050},
         {0.80, 0.50, 7.5, 0.065}, {0.20, 0.80, 10.5, 0.060},
         {0.50, 0.80, 4.0, 0.055}, {0.80, 0.80, 8.0, 0.070}},
        // 10 bumps: center, ring of six, inner arc of three
        {{0.50, 0.50, 12.0, 0.065}, {0.82, 0.50, 5.5, 0.055},
         {0.66, 0.777, 8.5, 0.060}, {0.34, 0.777, 6.0, 0.050},
         {0.18, 0.50, 9.5, 0.065}, {0.34, 0.223, 7.0, 0.055},
         {0.66, 0.223, 4.5, 0.050}, {0.50, 0.74, 10.0, 0.050},
         {0.2922, 0.38, 5.0, 0.045}, {0.7078, 0.38, 7.8, 0.045}},
        // 12 bumps: 4x3 lattice
        {{0.14, 0.20, 3.5, 0.050}, {0.38, 0.20, 11.0, 0.060},
         {0.62, 0.20, 4.2, 0.045}, {0.86, 0.20, 6.2, 0.055},
         {0.14, 0.50, 9.8, 0.065}, {0.38, 0.50, 5.2, 0.050},
         {0.62, 0.50, 8.2, 0.060}, {0.86, 0.50, 3.0, 0.045},
         {0.14, 0.80, 10.8, 0.060}, {0.38, 0.80, 6.8, 0.050},
         {0.62, 0.80, 12.0, 0.065}, {0.86, 0.80, 7.4, 0.055}},
        // 9 bumps: full 3x3 lattice
        {{0.15, 0.15, 3.2, 0.055}, {0.50, 0.15, 5.8, 0.050},
         {0.85, 0.15, 7.2, 0.060}, {0.15, 0.50, 4.6, 0.045},
         {0.50, 0.50, 12.0, 0.065}, {0.85, 0.50, 8.8, 0.055},
         {0.15, 0.85, 6.4, 0.050}, {0.50, 0.85, 10.2, 0.060},
         {0.85, 0.85, 5.4, 0.055}},
        // 11 bumps: row of five over row of six
        {{0.10, 0.25, 4.8, 0.050}, {0.30, 0.25, 9.2, 0.055},
         {0.50, 0.25, 3.4, 0.045}, {0.70, 0.25, 7.6, 0.060},
         {0.90, 0.25, 5.6, 0.050}, {0.09, 0.72, 12.0, 0.055},
         {0.253, 0.72, 6.6, 0.045}, {0.416, 0.72, 4.4, 0.045},
         {0.579, 0.72, 8.6, 0.055}, {0.742, 0.72, 3.8, 0.045},
         {0.905, 0.72, 10.6, 0.050}}};
    return kPatterns;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

} // namespace

Ensemble generate_gaussians_ensemble(int n_members, int n_patterns,
                                     std::array<int, 3> grid,
                                     double noise_sigma, std::uint64_t seed) {
    const int max_patterns = int(bump_patterns().size());
    if (n_members < 1)
        throw InvalidParameter("n_members must be >= 1");
    if (n_patterns < 1 || n_patterns > max_patterns)
        throw InvalidParameter("n_patterns must be in 1.." +
                               std::to_string(max_patterns));
    if (grid[2] != 1)
        throw InvalidParameter("gaussians ensembles are 2D; grid nz must be 1");
    if (grid[0] < 2 || grid[1] < 2)
        throw InvalidParameter("grid must be at least 2x2");
    if (!(noise_sigma >= 0.0))
        throw InvalidParameter("noise_sigma must be >= 0");

    const int nx = grid[0], ny = grid[1];
    Ensemble ensemble;
    ensemble.metadata["generator"] = "gaussians";
    ensemble.metadata["n_members"] = std::to_string(n_members);
    ensemble.metadata["n_patterns"] = std::to_string(n_patterns);
    ensemble.metadata["grid"] = std::to_string(nx) + "x" + std::to_string(ny);
    ensemble.metadata["noise_sigma"] = format_double(noise_sigma);
    ensemble.metadata["seed"] = std::to_string(seed);

    int width = 1;
    for (int v = n_members - 1; v >= 10; v /= 10) ++width;
    width = std::max(width, 3);

    for (int idx = 0; idx < n_members; ++idx) {
        ScalarField field;
        field.dims = grid;
        field.spacing = Eigen::Vector3d(1.0 / (nx - 1), 1.0 / (ny - 1), 1.0);
        field.origin = Eigen::Vector3d::Zero();
        field.values.resize(field.size());
        {
            std::ostringstream name;
            name << "member_";
            std::string digits = std::to_string(idx);
            name << std::string(std::size_t(std::max(0, width - int(digits.size()))), '0')
                 << digits;
            field.name = name.str();
        }

        const std::vector<Bump>& bumps = bump_patterns()[idx % n_patterns];
        std::int64_t v = 0;
        for (int j = 0; j < ny; ++j) {
            const double y = double(j) / (ny - 1);
            for (int i = 0; i < nx; ++i, ++v) {
                const double x = double(i) / (nx - 1);
                double s = 0.0;
                for (const Bump& b : bumps) {
                    const double dx = x - b.cx;
                    const double dy = y - b.cy;
                    s += b.amplitude *
                         std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
                }
                field.values[v] = s;
            }
        }

        if (noise_sigma > 0.0) {
            // One independent stream per member: generation order and thread
            // count cannot change any member's noise.
            std::mt19937_64 rng(splitmix64(seed ^ splitmix64(std::uint64_t(idx))));
            for (std::int64_t u = 0; u < field.values.size(); ++u)
                field.values[u] += noise_sigma * (2.0 * uniform01(rng) - 1.0);
        }
        ensemble.members.push_back(std::move(field));
    }
    return ensemble;
}

} // namespace topoclust
