#include "mtlmcrack/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtlmcrack/addxor.hpp"
#include "mtlmcrack/cipher.hpp"
#include "mtlmcrack/cpa.hpp"
#include "mtlmcrack/error.hpp"
#include "mtlmcrack/imgio.hpp"
#include "mtlmcrack/keyfile.hpp"
#include "mtlmcrack/kpa.hpp"
#include "mtlmcrack/randomness.hpp"

namespace mtlmcrack {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

json permutation_json(const PermutationParams& r)
{
    json a = json::array();
    for (auto v : r.values())
        a.push_back(static_cast<int>(v));
    return a;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw FormatError("cannot write " + path.string());
}

RgbImage read_required(const fs::path& dir, const char* name)
{
    const fs::path p = dir / name;
    if (!fs::exists(p))
        throw FormatError("pair directory " + dir.string() + " lacks " + name);
    return read_ppm(p);
}

PermutationParams parse_permutation(const std::string& text)
{
    std::array<std::uint8_t, 6> r{};
    std::istringstream in(text);
    std::string item;
    std::size_t u = 0;
    while (std::getline(in, item, ','))
    {
        if (u == 6)
            throw FormatError("permutation needs exactly six comma-separated integers");
        const int v = std::stoi(item);
        if (v < 1 || v > 255)
            throw KeyError("permutation integers must be in [1,255]");
        r[u++] = static_cast<std::uint8_t>(v);
    }
    if (u != 6)
        throw FormatError("permutation needs exactly six comma-separated integers");
    return PermutationParams(r);
}

/// Decrypt an optional target with a recovered key and score it against an optional truth
void finish_attack(json& report, std::ostream& out, const EquivalentKey& ek, const std::string& target,
                   const std::string& truth, const std::string& output)
{
    if (target.empty())
        return;
    const RgbImage decrypted = decrypt_with_equivalent_key(read_ppm(target), ek);
    if (!output.empty())
        write_ppm(decrypted, output);
    if (!truth.empty())
    {
        const double acc = pixel_accuracy(decrypted, read_ppm(truth));
        report["target_accuracy"] = acc;
        out << "target pixel accuracy: " << std::fixed << std::setprecision(4) << acc << '\n';
    }
}

void emit_report(const json& report, const std::string& path, std::ostream& out)
{
    if (!path.empty())
        write_text(path, report.dump(2) + "\n");
    else
        out << report.dump(2) << '\n';
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Workbench for the mixed transformed Logistic map image cipher and its attacks", "mtlmcrack"};
    app.require_subcommand(1);

    // keygen
    std::uint64_t keygen_seed = 1;
    std::size_t keygen_h = 256, keygen_w = 256;
    std::string keygen_out;
    auto* keygen = app.add_subcommand("keygen", "Write a random valid secret key");
    keygen->add_option("--seed", keygen_seed, "RNG seed")->capture_default_str();
    keygen->add_option("--height", keygen_h, "Image height the key must support")->capture_default_str();
    keygen->add_option("--width", keygen_w, "Image width the key must support")->capture_default_str();
    keygen->add_option("--out", keygen_out, "Key file to write")->required();

    // encrypt / decrypt
    std::string crypt_key, crypt_in, crypt_out;
    auto* enc = app.add_subcommand("encrypt", "Encrypt a PPM image");
    auto* dec = app.add_subcommand("decrypt", "Decrypt a PPM image");
    for (auto* sc : {enc, dec})
    {
        sc->add_option("--key", crypt_key, "Key file")->required();
        sc->add_option("--in", crypt_in, "Input PPM")->required();
        sc->add_option("--out", crypt_out, "Output PPM")->required();
    }

    // cpa-queries
    std::size_t q_h = 256, q_w = 256;
    std::string q_dir;
    auto* queries = app.add_subcommand("cpa-queries", "Write the two chosen plain-images (plain1.ppm, plain2.ppm)");
    queries->add_option("--height", q_h)->capture_default_str();
    queries->add_option("--width", q_w)->capture_default_str();
    queries->add_option("--out-dir", q_dir, "Directory to write into")->required();

    // attack-cpa
    std::string cpa_key, cpa_pairs, cpa_report, cpa_target, cpa_truth, cpa_output;
    std::size_t cpa_h = 256, cpa_w = 256;
    std::uint64_t cpa_seed = 7;
    auto* cpa = app.add_subcommand("attack-cpa", "Two-image chosen-plaintext attack");
    auto* cpa_key_opt = cpa->add_option("--oracle-key", cpa_key, "Hidden key for an in-process oracle");
    auto* cpa_pairs_opt =
        cpa->add_option("--pairs", cpa_pairs, "Directory with plain1/cipher1 (uniform) and plain2/cipher2 (marker)");
    cpa_key_opt->excludes(cpa_pairs_opt);
    cpa->add_option("--height", cpa_h, "Image height (oracle mode)")->capture_default_str();
    cpa->add_option("--width", cpa_w, "Image width (oracle mode)")->capture_default_str();
    cpa->add_option("--seed", cpa_seed, "Seed of the fresh image used to score the key (oracle mode)")
        ->capture_default_str();
    cpa->add_option("--report", cpa_report, "JSON report path (stdout if omitted)");
    cpa->add_option("--target", cpa_target, "Ciphertext to decrypt with the recovered key");
    cpa->add_option("--truth", cpa_truth, "Plaintext of --target for scoring");
    cpa->add_option("--out", cpa_output, "Where to write the decrypted --target");

    // attack-kpa
    std::string kpa_pairs, kpa_report, kpa_target, kpa_truth, kpa_output, kpa_perm;
    bool kpa_one_pair = false, kpa_strict = false;
    auto* kpa = app.add_subcommand("attack-kpa", "Known-plaintext attack from plain1/cipher1 and plain2/cipher2");
    kpa->add_option("--pairs", kpa_pairs, "Directory holding the known pairs")->required();
    kpa->add_flag("--one-pair", kpa_one_pair, "Use only the first pair for the diffusion streams");
    kpa->add_flag("--strict", kpa_strict, "Verify permutation candidates against every anchor");
    kpa->add_option("--permutation", kpa_perm, "Known r1..r6 as a comma list; skips permutation recovery");
    kpa->add_option("--report", kpa_report, "JSON report path (stdout if omitted)");
    kpa->add_option("--target", kpa_target, "Ciphertext to decrypt with the recovered key");
    kpa->add_option("--truth", kpa_truth, "Plaintext of --target for scoring");
    kpa->add_option("--out", kpa_output, "Where to write the decrypted --target");

    // randomness
    std::size_t rnd_count = 100;
    std::uint64_t rnd_seed = 2015;
    std::string rnd_source = "mtlm", rnd_layout = "xyz", rnd_report;
    auto* rnd = app.add_subcommand("randomness", "Statistical battery over keystreams");
    rnd->add_option("--count", rnd_count, "Number of sequences")->capture_default_str();
    rnd->add_option("--seed", rnd_seed, "Seed for keys or the control generator")->capture_default_str();
    rnd->add_option("--source", rnd_source, "mtlm or control")
        ->check(CLI::IsMember({"mtlm", "control"}))
        ->capture_default_str();
    rnd->add_option("--layout", rnd_layout, "xyz (interleaved) or x (X stream only)")
        ->check(CLI::IsMember({"xyz", "x"}))
        ->capture_default_str();
    rnd->add_option("--report", rnd_report, "Write the table here as well as to stdout");

    // dump
    std::string dump_key, dump_raw, dump_bits;
    std::size_t dump_len = 8192;
    auto* dump = app.add_subcommand("dump", "Dump a keystream for external test suites");
    dump->add_option("--key", dump_key, "Key file")->required();
    dump->add_option("--length", dump_len, "Number of MTLM iterations")->capture_default_str();
    dump->add_option("--out", dump_raw, "Raw interleaved X,Y,Z bytes");
    dump->add_option("--bits", dump_bits, "ASCII 0/1 dump, MSB first");

    // synth
    std::size_t syn_h = 256, syn_w = 256;
    std::uint64_t syn_seed = 1;
    std::string syn_out;
    auto* syn = app.add_subcommand("synth", "Write a seeded uniform-random PPM image");
    syn->add_option("--height", syn_h)->capture_default_str();
    syn->add_option("--width", syn_w)->capture_default_str();
    syn->add_option("--seed", syn_seed)->capture_default_str();
    syn->add_option("--out", syn_out, "Output PPM")->required();

    // figure-prob
    std::string fig_out;
    auto* fig = app.add_subcommand("figure-prob", "CSV of the verification pass probability for every y");
    fig->add_option("--out", fig_out, "CSV file")->required();

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try
    {
        if (*keygen)
        {
            std::mt19937_64 rng(keygen_seed);
            write_key_file(random_key(rng, keygen_h, keygen_w), keygen_out);
            out << "wrote " << keygen_out << '\n';
        }
        else if (*enc || *dec)
        {
            const SecretKey key = read_key_file(crypt_key);
            const RgbImage in = read_ppm(crypt_in);
            write_ppm(*enc ? encrypt(in, key) : decrypt(in, key), crypt_out);
            out << "wrote " << crypt_out << '\n';
        }
        else if (*queries)
        {
            fs::create_directories(q_dir);
            write_ppm(build_uniform_query(q_h, q_w), fs::path(q_dir) / "plain1.ppm");
            write_ppm(build_marker_query(q_h, q_w), fs::path(q_dir) / "plain2.ppm");
            out << "wrote plain1.ppm and plain2.ppm to " << q_dir << '\n';
        }
        else if (*cpa)
        {
            if (cpa_key.empty() && cpa_pairs.empty())
                throw FormatError("attack-cpa needs --oracle-key or --pairs");
            json report;
            const auto start = Clock::now();
            EquivalentKey ek;
            std::size_t query_count = 2;
            if (!cpa_key.empty())
            {
                const SecretKey key = read_key_file(cpa_key);
                EncryptionOracle oracle = EncryptionOracle::from_key(key, 2);
                ek = cpa_attack(oracle, cpa_h, cpa_w);
                query_count = oracle.queries();
                report["elapsed_seconds"] = seconds_since(start);

                const RgbImage fresh = synth_random(cpa_h, cpa_w, cpa_seed);
                const double acc = pixel_accuracy(decrypt_with_equivalent_key(encrypt(fresh, key), ek), fresh);
                report["fresh_image_accuracy"] = acc;
                out << "fresh image pixel accuracy: " << std::fixed << std::setprecision(4) << acc << '\n';
            }
            else
            {
                const fs::path dir(cpa_pairs);
                const RgbImage plain1 = read_required(dir, "plain1.ppm");
                if (plain1 != build_uniform_query(plain1.height(), plain1.width()))
                    throw FormatError("plain1.ppm is not the uniform (0,170,85) query image");
                ek = cpa_from_pairs(read_required(dir, "cipher1.ppm"), read_required(dir, "plain2.ppm"),
                                    read_required(dir, "cipher2.ppm"));
                report["elapsed_seconds"] = seconds_since(start);
            }
            report["attack"] = "chosen-plaintext";
            report["queries"] = query_count;
            report["height"] = ek.height;
            report["width"] = ek.width;
            report["r"] = permutation_json(*ek.r);
            out << "queries: " << query_count << '\n';
            finish_attack(report, out, ek, cpa_target, cpa_truth, cpa_output);
            emit_report(report, cpa_report, out);
        }
        else if (*kpa)
        {
            const fs::path dir(kpa_pairs);
            std::vector<KnownPair> pairs;
            pairs.push_back({read_required(dir, "plain1.ppm"), read_required(dir, "cipher1.ppm")});
            if (fs::exists(dir / "plain2.ppm"))
                pairs.push_back({read_required(dir, "plain2.ppm"), read_required(dir, "cipher2.ppm")});

            const VerifyMode mode = kpa_strict ? VerifyMode::Strict : VerifyMode::Default;
            json report;
            const auto start = Clock::now();

            std::optional<PermutationParams> r;
            ParamSearchStats search;
            if (!kpa_perm.empty())
                r = parse_permutation(kpa_perm);
            else if (pairs.size() >= 2)
                r = recover_all_permutation_params(pairs[0], pairs[1], mode, &search);
            else
                throw InsufficientContrast("one known pair needs --permutation");

            const std::span<const KnownPair> used =
                kpa_one_pair ? std::span<const KnownPair>(pairs).first(1) : std::span<const KnownPair>(pairs);
            KpaResult result = kpa_attack(used, r, mode);
            result.search = search;

            report["attack"] = "known-plaintext";
            report["pairs_used_for_diffusion"] = used.size();
            report["elapsed_seconds"] = seconds_since(start);
            report["r"] = permutation_json(*result.key.r);
            report["permutation_search"] = {{"core_map_evaluations", search.evaluations},
                                            {"anchors_visited", search.anchors_visited},
                                            {"candidates", search.candidates}};
            json sizes = json::object();
            std::size_t ambiguous = 0;
            for (const auto& [size, count] : result.set_sizes)
            {
                sizes[std::to_string(size)] = count;
                if (size > 2)
                    ambiguous += count;
            }
            report["candidate_set_sizes"] = sizes;
            report["ambiguous_positions"] = ambiguous;
            report["positions"] = result.key.size();

            out << "recovered r:";
            for (auto v : result.key.r->values())
                out << ' ' << static_cast<int>(v);
            out << "\nambiguous positions: " << ambiguous << " / " << result.key.size() << '\n';
            finish_attack(report, out, result.key, kpa_target, kpa_truth, kpa_output);
            emit_report(report, kpa_report, out);
        }
        else if (*rnd)
        {
            const auto start = Clock::now();
            const StreamLayout layout = rnd_layout == "x" ? StreamLayout::XOnly : StreamLayout::InterleavedXyz;
            const auto seqs = rnd_source == "mtlm" ? mtlm_sequences(rnd_count, rnd_seed, layout)
                                                   : control_sequences(rnd_count, rnd_seed);
            const BatteryReport rep = battery(seqs);
            std::ostringstream text;
            text << "source: " << rnd_source << " (seed " << rnd_seed << ", " << battery_bits << " bits each)\n"
                 << rep.table();
            out << text.str() << "elapsed: " << std::fixed << std::setprecision(1) << seconds_since(start) << " s\n";
            if (!rnd_report.empty())
                write_text(rnd_report, text.str());
        }
        else if (*dump)
        {
            if (dump_raw.empty() && dump_bits.empty())
                throw FormatError("dump needs --out and/or --bits");
            const SecretKey key = read_key_file(dump_key);
            const ByteSeq bytes = interleave(generate_keystream(key.k, key.init, dump_len));
            if (!dump_raw.empty())
                write_text(dump_raw, std::string(bytes.begin(), bytes.end()));
            if (!dump_bits.empty())
            {
                std::string ascii;
                ascii.reserve(8 * bytes.size());
                for (auto b : bytes_to_bits(bytes))
                    ascii.push_back(b ? '1' : '0');
                write_text(dump_bits, ascii);
            }
            out << "dumped " << bytes.size() << " bytes\n";
        }
        else if (*syn)
        {
            write_ppm(synth_random(syn_h, syn_w, syn_seed), syn_out);
            out << "wrote " << syn_out << '\n';
        }
        else if (*fig)
        {
            const auto curve = pass_probability_curve();
            std::ostringstream csv;
            csv << "y,probability\n" << std::setprecision(17);
            for (std::size_t y = 0; y < curve.size(); ++y)
                csv << y << ',' << curve[y] << '\n';
            write_text(fig_out, csv.str());
            out << "wrote " << fig_out << '\n';
        }
    }
    catch (const Error& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace mtlmcrack
