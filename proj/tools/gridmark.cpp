// gridmark: command-line front end for the grid watermarking pipeline.
//
//   gridmark gen      --kind harmonic --n 256 --seed 7 --out m.g3
//   gridmark embed    --model m.g3 --watermark wm.pbm --out w.g3
//   gridmark extract  --model w.g3 --w 32 --out x.pbm --reference wm.pbm
//   gridmark attack   --model w.g3 --spec crop:p=0.09 --out a.g3
//   gridmark bench    --model m.g3 --watermark wm.pbm --out-dir report
//   gridmark report   --csv report/report.csv --out report.md
//
// Exit status: 0 on success, 1 on a usage error, 2 on a pipeline error.

#include "gridmark/bench.hpp"
#include "gridmark/codec.hpp"
#include "gridmark/error.hpp"
#include "gridmark/metrics.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace gridmark;

namespace {

struct Options {
    std::string config;

    // gen
    std::string kind;
    int n = 256;
    std::uint64_t seed = 1;

    std::string model;
    std::string watermark;
    std::string out;
    std::string reference;
    std::string registration;
    std::string spec;
    std::string csv;
    std::string model_id;
    std::vector<std::string> extra_specs;
    int w = 0;
};

EmbedConfig config_of(const Options& o)
{
    return o.config.empty() ? EmbedConfig{} : load_config(o.config);
}

fs::path sidecar_path(const fs::path& out)
{
    fs::path p = out;
    p += ".reg";
    return p;
}

int run_gen(const Options& o)
{
    config_of(o);
    if (o.kind == "watermark") {
        save_watermark(generate_watermark(o.n, o.seed), o.out);
        std::printf("wrote %s (%dx%d watermark)\n", o.out.c_str(), o.n, o.n);
        return 0;
    }
    const GridModel m = generate_model(parse_model_kind(o.kind), o.n, o.seed);
    save_model(m, o.out);
    std::printf("wrote %s (%s, N=%d)\n", o.out.c_str(), o.kind.c_str(), m.n);
    return 0;
}

int run_embed(const Options& o)
{
    const EmbedConfig cfg = config_of(o);
    const GridModel m = load_model(o.model);
    const WatermarkBitmap wm = load_watermark(o.watermark);
    const EmbedReport rep = embed_detailed(m, wm, cfg);
    save_model(rep.model, o.out);
    std::printf("eligible slots: %d (need %d), silent bits: %d\n", rep.eligible_slots, rep.needed,
                rep.silent_bits);
    std::printf("PSNR: %.6f dB\n", psnr(m, rep.model));
    return 0;
}

int run_extract(const Options& o)
{
    const EmbedConfig cfg = config_of(o);
    GridModel m = load_model(o.model);
    if (!o.registration.empty())
        m = apply_transform(m, parse_registration(read_text_file(o.registration)));

    std::optional<WatermarkBitmap> ref;
    if (!o.reference.empty())
        ref = load_watermark(o.reference);
    int w = o.w;
    if (w == 0) {
        if (!ref)
            throw CLI::ValidationError("--w", "required when --reference is not given");
        w = ref->w;
    }

    const ExtractReport rep = extract_detailed(m, w, cfg);
    save_watermark(rep.watermark, o.out);
    std::printf("eligible slots: %d, silent bits: %d\n", rep.eligible_slots, rep.silent_bits);
    if (ref) {
        double r = 0.0;
        try {
            r = corr2(*ref, rep.watermark);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateInput)
                throw;
            std::printf("correlation: undefined (%s)\n", e.what());
            std::printf("BER: %.6f\n", ber(*ref, rep.watermark));
            return 0;
        }
        std::printf("correlation: %.6f\n", r);
        std::printf("BER: %.6f\n", ber(*ref, rep.watermark));
    }
    return 0;
}

int run_attack(const Options& o)
{
    config_of(o);
    const AttackSpec spec = parse_attack(o.spec);
    const AttackResult r = apply_attack(load_model(o.model), spec);
    save_model(r.model, o.out);
    std::printf("applied %s\n", format_attack(spec).c_str());
    if (r.registration) {
        const fs::path side = o.registration.empty() ? sidecar_path(o.out) : fs::path(o.registration);
        write_text_file(side, format_registration(*r.registration));
        std::printf("registration: %s\n", side.string().c_str());
    }
    return 0;
}

int run_bench_cmd(const Options& o)
{
    const EmbedConfig cfg = config_of(o);
    std::vector<AttackSpec> extra;
    for (const std::string& s : o.extra_specs)
        extra.push_back(parse_attack(s));
    const GridModel m = load_model(o.model);
    const WatermarkBitmap wm = load_watermark(o.watermark);
    const std::string id = o.model_id.empty() ? fs::path(o.model).stem().string() : o.model_id;

    const BenchReport rep = run_bench(m, wm, cfg, extra, id);
    write_bench(rep, o.out);
    std::fputs(bench_markdown(rep).c_str(), stdout);
    return 0;
}

int run_report(const Options& o)
{
    config_of(o);
    const BenchReport rep = parse_bench_csv(read_text_file(o.csv));
    const std::string md = bench_markdown(rep);
    if (o.out.empty())
        std::fputs(md.c_str(), stdout);
    else
        write_text_file(o.out, md);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Blind fuzzy-masked wavelet watermarking for regular-grid 3D models"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Options o;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "key=value embedding config")->check(CLI::ExistingFile);
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic model (or watermark with --kind watermark)");
    gen->add_option("--kind", o.kind, "plane | harmonic | meshgrid | bumps | watermark")->required();
    gen->add_option("--n", o.n, "grid side (watermark side for --kind watermark)");
    gen->add_option("--seed", o.seed, "generator seed");
    gen->add_option("--out", o.out, "output file")->required();
    add_config(gen);

    CLI::App* emb = app.add_subcommand("embed", "embed a PBM watermark into a GRID3 model");
    emb->add_option("--model", o.model)->required()->check(CLI::ExistingFile);
    emb->add_option("--watermark", o.watermark)->required()->check(CLI::ExistingFile);
    emb->add_option("--out", o.out)->required();
    add_config(emb);

    CLI::App* ext = app.add_subcommand("extract", "extract the watermark without the original model");
    ext->add_option("--model", o.model)->required()->check(CLI::ExistingFile);
    ext->add_option("--w", o.w, "watermark side; defaults to the reference's")->check(CLI::PositiveNumber);
    ext->add_option("--out", o.out)->required();
    ext->add_option("--reference", o.reference, "original watermark to correlate against")
        ->check(CLI::ExistingFile);
    ext->add_option("--registration", o.registration, "sidecar written by attack; applied before extraction")
        ->check(CLI::ExistingFile);
    add_config(ext);

    CLI::App* atk = app.add_subcommand("attack", "apply one attack, e.g. crop:p=0.09");
    atk->add_option("--model", o.model)->required()->check(CLI::ExistingFile);
    atk->add_option("--spec", o.spec)->required();
    atk->add_option("--out", o.out)->required();
    atk->add_option("--registration", o.registration, "sidecar path for rotate/translate (default <out>.reg)");
    add_config(atk);

    CLI::App* bench = app.add_subcommand("bench", "embed, run the attack battery, write CSV/markdown/PBMs");
    bench->add_option("--model", o.model)->required()->check(CLI::ExistingFile);
    bench->add_option("--watermark", o.watermark)->required()->check(CLI::ExistingFile);
    bench->add_option("--out-dir", o.out)->required();
    bench->add_option("--extra-spec", o.extra_specs, "additional attack row (repeatable)");
    bench->add_option("--model-id", o.model_id, "label for the report header");
    add_config(bench);

    CLI::App* rep = app.add_subcommand("report", "re-render a bench CSV as markdown");
    rep->add_option("--csv", o.csv)->required()->check(CLI::ExistingFile);
    rep->add_option("--out", o.out, "markdown file (stdout when omitted)");
    add_config(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed())
            return run_gen(o);
        if (emb->parsed())
            return run_embed(o);
        if (ext->parsed())
            return run_extract(o);
        if (atk->parsed())
            return run_attack(o);
        if (bench->parsed())
            return run_bench_cmd(o);
        return run_report(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "IoError: " << e.what() << "\n";
        return 2;
    }
}
