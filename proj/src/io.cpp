#include "parc/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace parc {

namespace {

constexpr char kSeriesMagic[8] = {'P', 'A', 'R', 'C', 'S', 'E', 'R', '1'};
constexpr char kModelMagic[8] = {'P', 'A', 'R', 'C', 'M', 'D', 'L', '1'};

nlohmann::json spec_to_json(const SeriesSpec& spec) {
    nlohmann::json j;
    j["system"] = to_string(spec.system);
    j["n_points"] = spec.n_points;
    j["sample_interval"] = spec.sample_interval;
    j["transient_discard"] = spec.transient_discard;
    j["substeps"] = spec.substeps;
    switch (spec.system) {
        case ChaoticSystem::Lorenz:
            j["params"] = {{"sigma", spec.lorenz.sigma},
                           {"rho", spec.lorenz.rho},
                           {"beta", spec.lorenz.beta},
                           {"init", spec.lorenz.init}};
            break;
        case ChaoticSystem::Rossler:
            j["params"] = {{"a", spec.rossler.a},
                           {"b", spec.rossler.b},
                           {"c", spec.rossler.c},
                           {"init", spec.rossler.init}};
            break;
        case ChaoticSystem::MackeyGlass:
            j["params"] = {{"beta", spec.mackey_glass.beta},
                           {"gamma", spec.mackey_glass.gamma},
                           {"exponent", spec.mackey_glass.exponent},
                           {"tau_delay", spec.mackey_glass.tau_delay},
                           {"history", spec.mackey_glass.history}};
            break;
    }
    return j;
}

template <typename T>
void write_raw(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("unexpected end of file");
    return v;
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::byte> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::byte b : bytes) {
        h ^= static_cast<std::uint64_t>(b);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t hash_series(std::span<const double> values) {
    return fnv1a64(std::as_bytes(values));
}

void write_series_text(const std::filesystem::path& path, const SeriesSpec& spec,
                       std::span<const double> values) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << "# " << spec_to_json(spec).dump() << "\n";
    char buf[40];
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        os << buf;
    }
    if (!os) throw Error("failed writing " + path.string());
}

void write_series_binary(const std::filesystem::path& path, const SeriesSpec& spec,
                         std::span<const double> values) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os.write(kSeriesMagic, sizeof kSeriesMagic);
    nlohmann::json j = spec_to_json(spec);
    j["length"] = values.size();
    const std::string header = j.dump();
    const auto hlen = static_cast<std::uint32_t>(header.size());
    write_raw(os, hlen);
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    const auto n = static_cast<std::uint64_t>(values.size());
    write_raw(os, n);
    os.write(reinterpret_cast<const char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!os) throw Error("failed writing " + path.string());
}

std::vector<double> read_series(const std::filesystem::path& path) {
    {
        std::ifstream probe(path, std::ios::binary);
        if (!probe) throw Error("cannot open " + path.string());
        char magic[8] = {};
        probe.read(magic, sizeof magic);
        if (probe && std::memcmp(magic, kSeriesMagic, sizeof magic) == 0) {
            const auto hlen = read_raw<std::uint32_t>(probe);
            probe.seekg(hlen, std::ios::cur);
            const auto n = read_raw<std::uint64_t>(probe);
            std::vector<double> values(n);
            probe.read(reinterpret_cast<char*>(values.data()),
                       static_cast<std::streamsize>(n * sizeof(double)));
            if (!probe) throw Error("truncated series file " + path.string());
            return values;
        }
    }
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path.string());
    std::vector<double> values;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        values.push_back(std::stod(line));
    }
    return values;
}

void write_model(const std::filesystem::path& path, const RidgeModel& model) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os.write(kModelMagic, sizeof kModelMagic);
    write_raw(os, model.lambda);
    const auto nw = static_cast<std::uint64_t>(model.weights.size());
    write_raw(os, nw);
    os.write(reinterpret_cast<const char*>(model.weights.data()),
             static_cast<std::streamsize>(model.weights.size() * sizeof(double)));

    const auto& st = model.preprocess_state;
    write_raw(os, st.epsilon);
    const auto nm = static_cast<std::uint64_t>(st.retained_mask.size());
    write_raw(os, nm);
    os.write(reinterpret_cast<const char*>(st.retained_mask.data()),
             static_cast<std::streamsize>(st.retained_mask.size()));
    const auto nc = static_cast<std::uint64_t>(st.column_means.size());
    write_raw(os, nc);
    os.write(reinterpret_cast<const char*>(st.column_means.data()),
             static_cast<std::streamsize>(nc * sizeof(double)));
    os.write(reinterpret_cast<const char*>(st.column_stds.data()),
             static_cast<std::streamsize>(nc * sizeof(double)));
    if (!os) throw Error("failed writing " + path.string());
}

RidgeModel read_model(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string());
    char magic[8] = {};
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kModelMagic, sizeof magic) != 0)
        throw Error(path.string() + " is not a model file");
    RidgeModel model;
    model.lambda = read_raw<double>(is);
    const auto nw = read_raw<std::uint64_t>(is);
    model.weights.resize(nw);
    is.read(reinterpret_cast<char*>(model.weights.data()),
            static_cast<std::streamsize>(nw * sizeof(double)));
    auto& st = model.preprocess_state;
    st.epsilon = read_raw<double>(is);
    const auto nm = read_raw<std::uint64_t>(is);
    st.retained_mask.resize(nm);
    is.read(reinterpret_cast<char*>(st.retained_mask.data()), static_cast<std::streamsize>(nm));
    const auto nc = read_raw<std::uint64_t>(is);
    st.column_means.resize(nc);
    st.column_stds.resize(nc);
    is.read(reinterpret_cast<char*>(st.column_means.data()),
            static_cast<std::streamsize>(nc * sizeof(double)));
    is.read(reinterpret_cast<char*>(st.column_stds.data()),
            static_cast<std::streamsize>(nc * sizeof(double)));
    if (!is) throw Error("truncated model file " + path.string());
    return model;
}

}  // namespace parc
