#include "reciplab/cli.hpp"

#include "reciplab/jsonio.hpp"
#include "reciplab/kummer.hpp"
#include "reciplab/reconstruct.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <set>

namespace reciplab {
namespace {

// Parses with exceptions on so malformed files report line and column.
Json parse_json_file(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

CompatibleSystemDataset load_dataset_checked(const std::string& path) {
    try {
        return dataset_from_json(parse_json_file(path));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

CharacterConfig load_config_checked(const std::string& path) {
    try {
        return character_config_from_json(parse_json_file(path));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_report(const std::string& path, const Json& j) {
    if (!path.empty()) atomic_write_text(path, j.dump(2) + "\n");
}

Json coords_json(const AlgebraicInteger& x) {
    Json a = Json::array();
    for (const Int& v : x.coords()) a.push_back(int_to_json(v));
    return a;
}

Json tuple_json(const ExponentTuple& t) {
    Json a = Json::array();
    for (long v : t.m) a.push_back(v);
    return a;
}

Json split_prime_json(const SplitPrime& s) {
    return Json{{"generator", coords_json(s.generator)}, {"norm", int_to_json(s.rational_norm)}};
}

Json verify_report_json(const VerifyReport& rep, const CompatibleSystemDataset& ds) {
    Json j;
    j["version"] = 1;
    j["structural_ok"] = rep.structural_ok;
    j["structural_failures"] = rep.structural_failures;
    j["candidates_checked"] = rep.candidates_checked;
    j["exact_match_ok"] = rep.exact_match_ok;
    Json mism = Json::array();
    for (size_t idx : rep.mismatched_records) {
        Json m;
        m["index"] = idx;
        if (idx < ds.records.size()) m["norm"] = int_to_json(ds.records[idx].r.rational_norm);
        mism.push_back(std::move(m));
    }
    j["mismatched_records"] = std::move(mism);
    Json sites = Json::array();
    for (const SiteFingerprint& fp : rep.site_fingerprints) {
        Json s;
        s["q"] = fp.q;
        s["omega"] = fp.omega;
        s["skipped"] = fp.skipped;
        s["record_hashes"] = fp.record_hash;
        sites.push_back(std::move(s));
    }
    j["site_fingerprints"] = std::move(sites);
    j["ok"] = rep.ok();
    return j;
}

struct GenerateOpts {
    std::string config_path, out_path;
    size_t primes = 0;
    u64 seed = 0;
    long max_norm = 100000;
};

int cmd_generate(const GenerateOpts& o) {
    CharacterConfig cfg = load_config_checked(o.config_path);
    CompatibleSystemDataset ds = generate_dataset(cfg.characters, o.primes, o.seed, Int(o.max_norm));
    save_dataset(ds, o.out_path);
    std::cout << "wrote " << o.out_path << ": " << ds.records.size() << " records, n = " << ds.n << "\n";
    return 0;
}

struct VerifyOpts {
    std::string ds_path, chars_path, out_path;
    size_t sites = 25;
    u64 seed = 0;
};

int cmd_verify(const VerifyOpts& o) {
    CompatibleSystemDataset ds = load_dataset_checked(o.ds_path);
    std::optional<CharacterConfig> cfg;
    const std::vector<HeckeCharacter>* candidates = nullptr;
    if (!o.chars_path.empty()) {
        cfg = load_config_checked(o.chars_path);
        candidates = &cfg->characters;
    }
    VerifyReport rep = verify_compatibility(ds, candidates, o.sites, o.seed);
    write_report(o.out_path, verify_report_json(rep, ds));
    if (!rep.structural_ok) {
        std::cout << "structural: FAIL\n";
        for (const std::string& f : rep.structural_failures) std::cout << "  " << f << "\n";
    } else {
        std::cout << "structural: ok (" << ds.records.size() << " records)\n";
    }
    if (rep.candidates_checked) {
        if (rep.exact_match_ok) {
            std::cout << "exact recompute: ok\n";
        } else {
            std::cout << "exact recompute: FAIL\n";
            for (size_t idx : rep.mismatched_records) {
                std::cout << "  record " << idx;
                if (idx < ds.records.size())
                    std::cout << " (norm " << ds.records[idx].r.rational_norm << ")";
                std::cout << ": charpoly does not match the candidate characters\n";
            }
        }
    }
    if (!rep.site_fingerprints.empty())
        std::cout << "fingerprinted " << rep.site_fingerprints.size() << " reduction sites\n";
    return rep.ok() ? 0 : 1;
}

struct ReconstructOpts {
    std::string ds_path, out_path;
    long bound = 0;
    u64 finite_order = 8;
    long modulus_norm_bound = 40;
    u64 seed = 0;
    size_t min_records = 3;
    size_t max_solutions = 8;
};

int cmd_reconstruct(const ReconstructOpts& o) {
    CompatibleSystemDataset ds = load_dataset_checked(o.ds_path);
    ReconstructConfig rc;
    rc.bound = o.bound;
    rc.finite_order_bound = o.finite_order;
    rc.modulus_norm_bound = Int(o.modulus_norm_bound);
    rc.seed = o.seed;
    rc.min_records = o.min_records;
    rc.max_solutions = o.max_solutions;
    RecoveredSystem rs;
    try {
        rs = reconstruct_system(ds, rc);
    } catch (const DataError& e) {
        write_report(o.out_path, Json{{"version", 1}, {"error", e.what()}, {"kind", "data"}});
        std::cerr << "reconstruction failed: " << e.what() << "\n";
        return 1;
    } catch (const NotFoundError& e) {
        write_report(o.out_path, Json{{"version", 1}, {"error", e.what()}, {"kind", "not-found"}});
        std::cerr << "reconstruction failed: " << e.what() << "\n";
        return 1;
    }

    CharacterConfig out_cfg{ds.K, ds.L, rs.characters};
    Json j = character_config_to_json(out_cfg);
    Json diag;
    diag["bound"] = rs.bound_used;
    diag["separating_prime"] = int_to_json(rs.separating_prime);
    Json tuples = Json::array();
    for (const ExponentTuple& t : rs.tuples) tuples.push_back(tuple_json(t));
    diag["tuples"] = std::move(tuples);
    Json per_record = Json::array();
    for (size_t r = 0; r < rs.per_record.size(); ++r) {
        Json rec;
        rec["norm"] = int_to_json(ds.records[r].r.rational_norm);
        Json rt = Json::array();
        Json res = Json::array();
        for (const MonomialDecomposition& md : rs.per_record[r].roots) {
            rt.push_back(tuple_json(md.tuple));
            res.push_back(Json{{"coords", coords_json(md.residual)}, {"order", md.m}});
        }
        rec["tuples"] = std::move(rt);
        rec["residuals"] = std::move(res);
        per_record.push_back(std::move(rec));
    }
    diag["per_record"] = std::move(per_record);
    diag["notes"] = rs.notes;
    diag["solutions"] = rs.solutions.size();
    j["diagnostics"] = std::move(diag);
    write_report(o.out_path, j);
    std::cout << "recovered " << rs.characters.size() << " characters (bound " << rs.bound_used
              << ", separating prime " << rs.separating_prime << ")";
    if (rs.solutions.size() > 1) std::cout << " -- " << rs.solutions.size() << " ambiguous solutions";
    std::cout << "\n";
    for (const std::string& note : rs.notes) std::cout << "  " << note << "\n";
    return 0;
}

struct CheckLemmaOpts {
    std::string ds_path, out_path;
    u64 ell = 0;
    long bound = 0;
    size_t records = 5;
    long tuple_bound = 0;
};

int cmd_check_lemma(const CheckLemmaOpts& o) {
    CompatibleSystemDataset ds = load_dataset_checked(o.ds_path);
    DatasetTuples dt;
    try {
        dt = decompose_dataset(ds, o.tuple_bound);
    } catch (const DataError& e) {
        write_report(o.out_path, Json{{"version", 1}, {"error", e.what()}, {"kind", "data"}});
        std::cerr << "tuple recovery failed: " << e.what() << "\n";
        return 1;
    } catch (const NotFoundError& e) {
        write_report(o.out_path, Json{{"version", 1}, {"error", e.what()}, {"kind", "not-found"}});
        std::cerr << "tuple recovery failed: " << e.what() << "\n";
        return 1;
    }

    const size_t nrec = std::min(o.records, ds.records.size());
    size_t checked = 0, total_samples = 0, total_violations = 0;
    bool inconclusive = false;
    Json results = Json::array();
    for (size_t a = 0; a < nrec; ++a) {
        for (size_t b = 0; b < nrec; ++b) {
            if (a == b) continue;
            for (size_t i = 0; i < dt.tuples.size(); ++i) {
                LemmaReport rep = lemma_splitting_check(ds.records[a].r, ds.records[b].r, dt.tuples[i], dt.tuples,
                                                        o.ell, Int(o.bound), ds.S);
                ++checked;
                total_samples += rep.samples;
                total_violations += rep.violations.size();
                inconclusive = inconclusive || rep.inconclusive;
                Json entry;
                entry["r"] = int_to_json(ds.records[a].r.rational_norm);
                entry["rp"] = int_to_json(ds.records[b].r.rational_norm);
                entry["tuple"] = tuple_json(dt.tuples[i]);
                entry["samples"] = rep.samples;
                Json viols = Json::array();
                for (const SplitPrime& s : rep.violations) viols.push_back(split_prime_json(s));
                entry["violations"] = std::move(viols);
                entry["inconclusive"] = rep.inconclusive;
                results.push_back(std::move(entry));
            }
        }
    }
    const bool ok = checked > 0 && !inconclusive && total_violations == 0;
    Json j;
    j["version"] = 1;
    j["ell"] = o.ell;
    j["bound"] = o.bound;
    j["records_paired"] = nrec;
    j["checks"] = checked;
    j["results"] = std::move(results);
    j["ok"] = ok;
    write_report(o.out_path, j);
    std::cout << "checked " << checked << " (r, r', tuple) triples at ell = " << o.ell << ": " << total_samples
              << " qualifying samples, " << total_violations << " violations"
              << (inconclusive ? " (some checks had no samples; raise --bound)" : "") << "\n";
    return ok ? 0 : 1;
}

struct CheckClaimOpts {
    std::string out_path;
    u64 ell = 0;
    size_t dim = 0, k = 0, trials = 0;
    u64 seed = 0;
};

int cmd_check_claim(const CheckClaimOpts& o) {
    if (o.dim == 0) throw ConfigError("check-claim: --dim must be positive");
    SeededRng rng(o.seed);
    size_t successes = 0;
    Json witnesses = Json::array();
    for (size_t trial = 0; trial < o.trials; ++trial) {
        std::vector<FlSubspace> subs;
        for (size_t s = 0; s < o.k; ++s) {
            size_t rank = o.dim > 1 ? 1 + rng.below(o.dim - 1) : 0;
            std::vector<std::vector<u64>> rows(rank, std::vector<u64>(o.dim));
            for (auto& row : rows)
                for (auto& x : row) x = rng.below(o.ell);
            subs.emplace_back(o.ell, o.dim, rows);
        }
        std::vector<u64> v = find_uncovered_vector(subs, rng);
        bool outside = true;
        for (const FlSubspace& s : subs) outside = outside && !s.contains(v);
        if (outside) ++successes;
        witnesses.push_back(v);
    }
    const bool ok = successes == o.trials;
    Json j;
    j["version"] = 1;
    j["ell"] = o.ell;
    j["dim"] = o.dim;
    j["k"] = o.k;
    j["trials"] = o.trials;
    j["successes"] = successes;
    j["witnesses"] = std::move(witnesses);
    j["ok"] = ok;
    write_report(o.out_path, j);
    std::cout << successes << "/" << o.trials << " uncovered vectors found and re-verified\n";
    return ok ? 0 : 1;
}

struct SeparatingPrimeOpts {
    std::string out_path;
    unsigned field = 0;
    std::vector<long> alpha;
    long norm_bound = 0;
    std::vector<long> forbid;
};

int cmd_separating_prime(const SeparatingPrimeOpts& o) {
    FieldPtr K = CyclotomicField::make(o.field);
    std::vector<Int> coords(o.alpha.begin(), o.alpha.end());
    AlgebraicInteger alpha = K->element(coords);
    std::set<Int> forbidden;
    for (long p : o.forbid) forbidden.insert(Int(p));
    Int p = select_separating_prime(alpha, o.norm_bound, forbidden);
    std::vector<Int> diffs = separating_difference_norms(alpha, 2 * o.norm_bound);
    bool coprime = true;
    for (const Int& d : diffs) coprime = coprime && d % p != 0;
    Json j;
    j["version"] = 1;
    j["field"] = o.field;
    Json ac = Json::array();
    for (long v : o.alpha) ac.push_back(v);
    j["alpha"] = std::move(ac);
    j["norm_bound"] = o.norm_bound;
    j["p_prime"] = int_to_json(p);
    Json dn = Json::array();
    for (const Int& d : diffs) dn.push_back(int_to_json(d));
    j["difference_norms"] = std::move(dn);
    j["all_coprime"] = coprime;
    write_report(o.out_path, j);
    std::cout << "p' = " << p << " (" << diffs.size() << " distinct difference norms, "
              << (coprime ? "all coprime" : "NOT coprime") << ")\n";
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"compatible-system datasets from Hecke characters on cyclotomic fields"};
    app.name("recip-lab");
    app.require_subcommand(1);
    int rc = 0;

    GenerateOpts gen;
    CLI::App* g = app.add_subcommand("generate", "sample split primes and write charpoly records");
    g->add_option("--config", gen.config_path, "character/field config JSON")->required();
    g->add_option("--primes", gen.primes, "number of records to sample")->required();
    g->add_option("--seed", gen.seed, "sampling seed")->required();
    g->add_option("--max-norm", gen.max_norm, "norm cap for sampled primes")->capture_default_str();
    g->add_option("-o,--output", gen.out_path, "dataset output path")->required();
    g->callback([&] { rc = cmd_generate(gen); });

    VerifyOpts ver;
    CLI::App* v = app.add_subcommand("verify", "structural checks, optional exact recompute, site fingerprints");
    v->add_option("dataset", ver.ds_path, "dataset JSON")->required();
    v->add_option("--chars", ver.chars_path, "recompute every record against these characters");
    v->add_option("--sites", ver.sites, "number of sampled reduction sites")->capture_default_str();
    v->add_option("--seed", ver.seed, "site-sampling seed")->required();
    v->add_option("-o,--output", ver.out_path, "verification report path");
    v->callback([&] { rc = cmd_verify(ver); });

    ReconstructOpts rec;
    CLI::App* r = app.add_subcommand("reconstruct", "recover the generating characters from a dataset");
    r->add_option("dataset", rec.ds_path, "dataset JSON")->required();
    r->add_option("--bound", rec.bound, "exponent bound per tuple entry (0 = derive)")->capture_default_str();
    r->add_option("--finite-order", rec.finite_order, "finite-part order bound")->capture_default_str();
    r->add_option("--modulus-norm-bound", rec.modulus_norm_bound, "candidate modulus prime norm cap")
        ->capture_default_str();
    r->add_option("--seed", rec.seed, "seed for the companion-prime search")->required();
    r->add_option("--min-records", rec.min_records, "minimum records required")->capture_default_str();
    r->add_option("--max-solutions", rec.max_solutions, "cap on reported ambiguous solutions")->capture_default_str();
    r->add_option("-o,--output", rec.out_path, "recovered characters + diagnostics path")->required();
    r->callback([&] { rc = cmd_reconstruct(rec); });

    CheckLemmaOpts lem;
    CLI::App* cl = app.add_subcommand("check-lemma", "residue-level splitting check over record pairs");
    cl->add_option("dataset", lem.ds_path, "dataset JSON")->required();
    cl->add_option("--ell", lem.ell, "odd prime ell")->required();
    cl->add_option("--bound", lem.bound, "sample primes up to this norm")->required();
    cl->add_option("--records", lem.records, "pair the first k records")->capture_default_str();
    cl->add_option("--tuple-bound", lem.tuple_bound, "exponent bound for tuple recovery (0 = derive)")
        ->capture_default_str();
    cl->add_option("-o,--output", lem.out_path, "report path");
    cl->callback([&] { rc = cmd_check_lemma(lem); });

    CheckClaimOpts clm;
    CLI::App* cc = app.add_subcommand("check-claim", "uncovered vectors outside unions of proper subspaces");
    cc->add_option("--ell", clm.ell, "prime modulus")->required();
    cc->add_option("--dim", clm.dim, "ambient dimension")->required();
    cc->add_option("--k", clm.k, "subspaces per instance")->required();
    cc->add_option("--trials", clm.trials, "number of random instances")->required();
    cc->add_option("--seed", clm.seed, "instance seed")->required();
    cc->add_option("-o,--output", clm.out_path, "report path");
    cc->callback([&] { rc = cmd_check_claim(clm); });

    SeparatingPrimeOpts sep;
    CLI::App* sp = app.add_subcommand("separating-prime", "least prime distinguishing bounded exponent tuples");
    sp->add_option("--field", sep.field, "cyclotomic conductor")->required();
    sp->add_option("--alpha", sep.alpha, "power-basis coordinates of the generator")->required();
    sp->add_option("--norm-bound", sep.norm_bound, "entry bound N_b on the tuples")->required();
    sp->add_option("--forbid", sep.forbid, "primes to skip");
    sp->add_option("-o,--output", sep.out_path, "report path");
    sp->callback([&] { rc = cmd_separating_prime(sep); });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("recip-lab");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NotFoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}

int run_command(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_command(args);
}

}  // namespace reciplab
