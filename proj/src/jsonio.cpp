#include "reciplab/jsonio.hpp"

#include "reciplab/primes.hpp"

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace reciplab {

namespace {

const Json& need(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw DataError(std::string("missing key \"") + key + '"');
    return *it;
}

Json coords_to_json(const AlgebraicInteger& x) {
    Json a = Json::array();
    for (const Int& c : x.coords()) a.push_back(int_to_json(c));
    return a;
}

AlgebraicInteger coords_from_json(const Json& j, const FieldPtr& F, const char* what) {
    if (!j.is_array() || j.size() != F->degree())
        throw DataError(std::string(what) + ": expected a coordinate vector of length " + std::to_string(F->degree()));
    std::vector<Int> cs;
    cs.reserve(j.size());
    for (const Json& e : j) cs.push_back(json_to_int(e, what));
    return F->element(std::move(cs));
}

u64 json_to_u64(const Json& j, const char* what) {
    Int v = json_to_int(j, what);
    if (v < 0 || !v.fits_ulong_p()) throw DataError(std::string(what) + ": expected a nonnegative integer");
    return v.get_ui();
}

unsigned json_to_unsigned(const Json& j, const char* what) {
    u64 v = json_to_u64(j, what);
    if (v > std::numeric_limits<unsigned>::max()) throw DataError(std::string(what) + ": out of range");
    return static_cast<unsigned>(v);
}

}  // namespace

Json int_to_json(const Int& v) {
    if (!v.fits_slong_p()) throw DataError("integer out of serializable range: " + v.get_str());
    return Json(static_cast<std::int64_t>(v.get_si()));
}

Int json_to_int(const Json& j, const char* what) {
    if (j.is_number_unsigned()) {
        u64 u = j.get<std::uint64_t>();
        if (u > static_cast<u64>(std::numeric_limits<std::int64_t>::max()))
            throw DataError(std::string(what) + ": integer too large");
        return Int(static_cast<unsigned long>(u));
    }
    if (!j.is_number_integer()) throw DataError(std::string(what) + ": expected an integer");
    return Int(static_cast<long>(j.get<std::int64_t>()));
}

Json dataset_to_json(const CompatibleSystemDataset& ds) {
    Json j;
    j["version"] = 1;
    j["K"] = Json{{"N", ds.K->conductor()}};
    j["L"] = Json{{"N", ds.L->conductor()}};
    j["n"] = ds.n;
    Json s = Json::array();
    for (const Int& p : ds.S) s.push_back(int_to_json(p));
    j["S"] = std::move(s);
    Json t = Json::array();
    for (const Int& p : ds.T_extra) t.push_back(int_to_json(p));
    j["T_extra"] = std::move(t);
    Json recs = Json::array();
    for (const DatasetRecord& rec : ds.records) {
        Json r;
        r["generator"] = coords_to_json(rec.r.generator);
        r["norm"] = int_to_json(rec.r.rational_norm);
        Json cp = Json::array();
        for (const AlgebraicInteger& c : rec.charpoly) cp.push_back(coords_to_json(c));
        r["charpoly"] = std::move(cp);
        recs.push_back(std::move(r));
    }
    j["records"] = std::move(recs);
    return j;
}

CompatibleSystemDataset dataset_from_json(const Json& j) {
    if (!j.is_object()) throw DataError("dataset: expected a JSON object");
    if (json_to_int(need(j, "version"), "version") != 1) throw DataError("dataset: unsupported version");
    CompatibleSystemDataset ds;
    ds.K = CyclotomicField::make(json_to_unsigned(need(need(j, "K"), "N"), "K.N"));
    ds.L = CyclotomicField::make(json_to_unsigned(need(need(j, "L"), "N"), "L.N"));
    ds.n = json_to_unsigned(need(j, "n"), "n");
    for (const Json& p : need(j, "S")) ds.S.push_back(json_to_int(p, "S"));
    for (const Json& p : need(j, "T_extra")) ds.T_extra.push_back(json_to_int(p, "T_extra"));
    for (const Json& r : need(j, "records")) {
        DatasetRecord rec;
        // No canonicalisation or validation here: a loaded file must surface
        // exactly what is on disk so the verifier can flag it.
        rec.r.generator = coords_from_json(need(r, "generator"), ds.K, "generator");
        rec.r.rational_norm = json_to_int(need(r, "norm"), "norm");
        const Json& cp = need(r, "charpoly");
        if (!cp.is_array() || cp.empty()) throw DataError("charpoly: expected a nonempty array");
        for (const Json& c : cp) rec.charpoly.push_back(coords_from_json(c, ds.L, "charpoly"));
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

std::string serialize_dataset(const CompatibleSystemDataset& ds) { return dataset_to_json(ds).dump(2) + "\n"; }

CompatibleSystemDataset parse_dataset(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DataError("dataset: malformed JSON");
    return dataset_from_json(j);
}

Json character_to_json(const HeckeCharacter& chi) {
    Json j;
    Json mod = Json::array();
    Json fp = Json::array();
    for (const FactorCharacter& f : chi.finite_part.factors()) {
        mod.push_back(coords_to_json(f.prime.generator));
        fp.push_back(Json{{"p", int_to_json(f.prime.rational_norm)}, {"g", f.g}, {"t", f.t}, {"k", f.k}});
    }
    j["modulus"] = std::move(mod);
    j["finite_part"] = std::move(fp);
    Json ity = Json::object();
    const std::vector<unsigned>& residues = chi.K->galois_residues();
    for (size_t i = 0; i < residues.size(); ++i) ity[std::to_string(residues[i])] = chi.infinity_type.m[i];
    j["infinity_type"] = std::move(ity);
    if (chi.finite_part.special()) j["special_two_part"] = chi.finite_part.special()->k;
    return j;
}

HeckeCharacter character_from_json(const Json& j, const FieldPtr& K, const FieldPtr& L) {
    if (!j.is_object()) throw DataError("character: expected a JSON object");
    const Json& mod = need(j, "modulus");
    const Json& fp = need(j, "finite_part");
    if (!mod.is_array() || !fp.is_array() || mod.size() != fp.size())
        throw DataError("character: modulus and finite_part must be arrays of equal length");
    std::vector<FactorCharacter> factors;
    for (size_t i = 0; i < mod.size(); ++i) {
        FactorCharacter fac;
        fac.prime = make_split_prime(coords_from_json(mod[i], K, "modulus"));
        const Json& f = fp[i];
        if (fac.prime.rational_norm != json_to_int(need(f, "p"), "finite_part.p"))
            throw DataError("finite_part: p disagrees with the matching modulus entry");
        fac.g = json_to_u64(need(f, "g"), "finite_part.g");
        fac.t = json_to_u64(need(f, "t"), "finite_part.t");
        fac.k = json_to_u64(need(f, "k"), "finite_part.k");
        factors.push_back(std::move(fac));
    }
    std::optional<SpecialTwoPart> special;
    if (j.contains("special_two_part"))
        special = SpecialTwoPart{json_to_unsigned(j.at("special_two_part"), "special_two_part")};

    const Json& ity = need(j, "infinity_type");
    if (!ity.is_object() || ity.size() != K->galois_residues().size())
        throw DataError("infinity_type: expected one exponent per Galois residue");
    std::vector<long> m;
    for (unsigned a : K->galois_residues()) {
        const std::string key = std::to_string(a);
        if (!ity.contains(key)) throw DataError("infinity_type: missing residue " + key);
        Int e = json_to_int(ity.at(key), "infinity_type");
        if (!e.fits_slong_p()) throw DataError("infinity_type: exponent out of range");
        m.push_back(e.get_si());
    }
    return make_hecke_character(K, L, ExponentTuple{std::move(m)},
                                FiniteOrderCharacter(K, L, std::move(factors), special));
}

Json character_config_to_json(const CharacterConfig& cfg) {
    Json j;
    j["version"] = 1;
    Json kj;
    kj["N"] = cfg.K->conductor();
    Json units = Json::array();
    for (const AlgebraicInteger& u : cfg.K->unit_basis()) units.push_back(coords_to_json(u));
    kj["units"] = std::move(units);
    j["K"] = std::move(kj);
    j["L"] = Json{{"N", cfg.L->conductor()}};
    Json chars = Json::array();
    for (const HeckeCharacter& chi : cfg.characters) chars.push_back(character_to_json(chi));
    j["characters"] = std::move(chars);
    return j;
}

CharacterConfig character_config_from_json(const Json& j) {
    if (!j.is_object()) throw DataError("config: expected a JSON object");
    if (json_to_int(need(j, "version"), "version") != 1) throw DataError("config: unsupported version");
    const Json& kj = need(j, "K");
    const unsigned NK = json_to_unsigned(need(kj, "N"), "K.N");
    FieldPtr K;
    if (kj.contains("units")) {
        std::vector<std::vector<Int>> ucs;
        for (const Json& u : kj.at("units")) {
            if (!u.is_array()) throw DataError("K.units: expected coordinate vectors");
            std::vector<Int> cs;
            for (const Json& e : u) cs.push_back(json_to_int(e, "K.units"));
            ucs.push_back(std::move(cs));
        }
        K = CyclotomicField::make(NK, ucs);
    } else {
        K = CyclotomicField::make(NK);
    }
    FieldPtr L = CyclotomicField::make(json_to_unsigned(need(need(j, "L"), "N"), "L.N"));
    CharacterConfig cfg{K, L, {}};
    for (const Json& cj : need(j, "characters")) cfg.characters.push_back(character_from_json(cj, K, L));
    return cfg;
}

std::string serialize_character_config(const CharacterConfig& cfg) {
    return character_config_to_json(cfg).dump(2) + "\n";
}

CharacterConfig parse_character_config(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DataError("config: malformed JSON");
    return character_config_from_json(j);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    const fs::path tmp = dir / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DataError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw DataError("rename failed for " + path + ": " + ec.message());
    }
}

CompatibleSystemDataset load_dataset(const std::string& path) { return parse_dataset(read_text_file(path)); }

void save_dataset(const CompatibleSystemDataset& ds, const std::string& path) {
    atomic_write_text(path, serialize_dataset(ds));
}

CharacterConfig load_character_config(const std::string& path) {
    return parse_character_config(read_text_file(path));
}

void save_character_config(const CharacterConfig& cfg, const std::string& path) {
    atomic_write_text(path, serialize_character_config(cfg));
}

}  // namespace reciplab
