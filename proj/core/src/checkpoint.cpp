#include "verity/checkpoint.hpp"

#include "verity/errors.hpp"

#include <cstring>
#include <fstream>

namespace verity {

namespace {

constexpr char kMagic[8] = {'V', 'R', 'T', 'Y', 'C', 'K', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

void write_bytes(std::ostream& out, const void* data, std::size_t size) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

void write_u32(std::ostream& out, std::uint32_t v) { write_bytes(out, &v, sizeof(v)); }
void write_u64(std::ostream& out, std::uint64_t v) { write_bytes(out, &v, sizeof(v)); }
void write_f64(std::ostream& out, double v) { write_bytes(out, &v, sizeof(v)); }

void write_string(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    write_bytes(out, s.data(), s.size());
}

void write_doubles(std::ostream& out, std::span<const double> values) {
    write_u64(out, values.size());
    write_bytes(out, values.data(), values.size() * sizeof(double));
}

void read_bytes(std::istream& in, void* data, std::size_t size, const char* what) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in.gcount()) != size) {
        throw IoFailure(std::string("checkpoint truncated while reading ") + what);
    }
}

std::uint32_t read_u32(std::istream& in, const char* what) {
    std::uint32_t v = 0;
    read_bytes(in, &v, sizeof(v), what);
    return v;
}

std::uint64_t read_u64(std::istream& in, const char* what) {
    std::uint64_t v = 0;
    read_bytes(in, &v, sizeof(v), what);
    return v;
}

double read_f64(std::istream& in, const char* what) {
    double v = 0;
    read_bytes(in, &v, sizeof(v), what);
    return v;
}

std::string read_string(std::istream& in, const char* what) {
    std::uint32_t size = read_u32(in, what);
    std::string s(size, '\0');
    if (size > 0) read_bytes(in, s.data(), size, what);
    return s;
}

std::vector<double> read_doubles(std::istream& in, const char* what) {
    std::uint64_t count = read_u64(in, what);
    std::vector<double> values(count);
    if (count > 0) read_bytes(in, values.data(), count * sizeof(double), what);
    return values;
}

} // namespace

void save_checkpoint(const std::filesystem::path& path, const VerifierModel& model,
                     const TrainState* state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");

    write_bytes(out, kMagic, sizeof(kMagic));
    write_u32(out, kVersion);
    write_string(out, model.extractor().architecture());
    write_u64(out, model.max_tokens());
    write_f64(out, model.temperature());
    write_u64(out, model.extractor().dim());

    const auto& tokens = model.vocab().tokens();
    write_u64(out, tokens.size());
    for (const std::string& tok : tokens) write_string(out, tok);

    write_doubles(out, model.extractor().params());
    write_doubles(out, model.head().weight);
    write_f64(out, model.head().bias);

    out.put(state ? 1 : 0);
    if (state) {
        out.put(state->stage);
        write_u64(out, state->step);
        write_doubles(out, state->m);
        write_doubles(out, state->v);
    }
    if (!out) throw IoFailure("failed writing " + path.string());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());

    char magic[8] = {};
    read_bytes(in, magic, sizeof(magic), "magic");
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw IoFailure(path.string() + " is not a checkpoint file");
    }
    std::uint32_t version = read_u32(in, "version");
    if (version != kVersion) {
        throw IoFailure("unsupported checkpoint version " + std::to_string(version));
    }
    std::string architecture = read_string(in, "architecture");
    std::uint64_t max_tokens = read_u64(in, "max_tokens");
    double temperature = read_f64(in, "temperature");
    std::uint64_t dim = read_u64(in, "dim");

    std::uint64_t vocab_count = read_u64(in, "vocab size");
    std::vector<std::string> tokens;
    tokens.reserve(vocab_count);
    for (std::uint64_t i = 0; i < vocab_count; ++i) {
        tokens.push_back(read_string(in, "vocab token"));
    }
    Vocabulary vocab = Vocabulary::from_tokens(std::move(tokens));

    auto extractor = std::make_unique<AttentionExtractor>(vocab_count, dim);
    if (extractor->architecture() != architecture) {
        throw IoFailure("unknown extractor architecture '" + architecture + "'");
    }
    std::vector<double> params = read_doubles(in, "extractor params");
    if (params.size() != extractor->param_count()) {
        throw IoFailure("extractor parameter count mismatch");
    }
    std::copy(params.begin(), params.end(), extractor->params().begin());

    LinearHead head;
    head.weight = read_doubles(in, "head weight");
    head.bias = read_f64(in, "head bias");

    VerifierModel model(std::move(vocab), std::move(extractor), std::move(head),
                        static_cast<std::size_t>(max_tokens));
    model.set_temperature(temperature);

    LoadedCheckpoint loaded{std::move(model), std::nullopt};
    int has_state = in.get();
    if (has_state == 1) {
        TrainState state;
        int stage = in.get();
        if (stage != 'a' && stage != 'b') throw IoFailure("bad stage tag in train state");
        state.stage = static_cast<char>(stage);
        state.step = read_u64(in, "train step");
        state.m = read_doubles(in, "adam m");
        state.v = read_doubles(in, "adam v");
        loaded.state = std::move(state);
    }
    return loaded;
}

} // namespace verity
