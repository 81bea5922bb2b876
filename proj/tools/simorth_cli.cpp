#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <simorth/hyperreal.hpp>
#include <simorth/io.hpp>
#include <simorth/oracle.hpp>

using namespace simorth;

namespace {

struct CommandResult {
    int exit_code = 0;
    Json body;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::InvalidArgument, "cannot open \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Json error_body(const Error& e)
{
    Json j = Json::object();
    j["error"] = e.what();
    j["code"] = error_code_name(e.code());
    return j;
}

void emit(const Json& body) { std::cout << body.dump(2) << '\n'; }

/** Runs one command body, turning domain errors into exit-3 diagnostics. */
template <typename Fn>
int run_guarded(Fn&& fn)
{
    try {
        CommandResult result = fn();
        emit(result.body);
        return result.exit_code;
    } catch (const Error& e) {
        emit(error_body(e));
        return 3;
    } catch (const std::exception& e) {
        Json j = Json::object();
        j["error"] = e.what();
        j["code"] = "internal";
        emit(j);
        return 3;
    }
}

int outcome_exit_code(CheckVerdict v)
{
    switch (v) {
        case CheckVerdict::Certified: return 0;
        case CheckVerdict::NotOrthogonalizable: return 1;
        case CheckVerdict::Indeterminate: return 2;
    }
    return 2;
}

CommandResult check_one(const std::string& path, std::size_t budget)
{
    AnyFamily parsed = parse_family_text(read_file(path));
    return std::visit(
        [&](const auto& pf) {
            auto outcome = check_so(pf.as_form_family(), budget);
            return CommandResult{outcome_exit_code(outcome.verdict),
                                 serialize_outcome(outcome)};
        },
        parsed);
}

CommandResult run_check(const std::vector<std::string>& files, std::size_t budget)
{
    if (files.size() == 1)
        return check_one(files.front(), budget);

    // Batch mode: independent families are checked concurrently, but the
    // output object is keyed by input path in argument order, so the bytes
    // are deterministic regardless of scheduling.
    std::vector<std::future<CommandResult>> tasks;
    tasks.reserve(files.size());
    for (const auto& file : files)
        tasks.push_back(std::async(std::launch::async, [file, budget] {
            try {
                return check_one(file, budget);
            } catch (const Error& e) {
                return CommandResult{3, error_body(e)};
            }
        }));
    CommandResult result;
    result.body = Json::object();
    for (std::size_t i = 0; i < files.size(); ++i) {
        CommandResult one = tasks[i].get();
        result.body[files[i]] = std::move(one.body);
        result.exit_code = std::max(result.exit_code, one.exit_code);
    }
    return result;
}

CommandResult run_orthogonalize(const std::string& path, std::size_t base)
{
    AnyFamily parsed = parse_family_text(read_file(path));
    return std::visit(
        [&](const auto& pf) {
            auto result = orthogonalize_degenerate(pf.as_form_family(), base);
            Json body = Json::object();
            if (result.ok()) {
                body["certificate"] = serialize_certificate(*result.certificate);
                return CommandResult{0, std::move(body)};
            }
            body["failure"] = serialize_failure(*result.failure);
            return CommandResult{1, std::move(body)};
        },
        parsed);
}

CommandResult run_combo(const std::string& path, std::size_t budget)
{
    AnyFamily parsed = parse_family_text(read_file(path));
    return std::visit(
        [&](const auto& pf) {
            using S = typename std::decay_t<decltype(pf)>::value_type;
            auto combo = nondegenerate_combination(pf.as_form_family(), budget);
            Json body = Json::object();
            body["found"] = combo.found;
            if (combo.found) {
                Json coefficients = Json::array();
                for (const auto& c : combo.coefficients)
                    coefficients.push_back(ScalarTraits<S>::print(c));
                body["coefficients"] = std::move(coefficients);
            } else {
                body["reason"] = combo.failure == ComboFailure::IdenticallySingular
                                     ? "identically_singular"
                                     : "budget_exhausted";
            }
            body["evaluations"] = static_cast<long long>(combo.evaluations);
            int code = combo.found
                           ? 0
                           : (combo.failure == ComboFailure::IdenticallySingular ? 1 : 2);
            return CommandResult{code, std::move(body)};
        },
        parsed);
}

CommandResult run_radical(const std::string& path, std::size_t form)
{
    AnyFamily parsed = parse_family_text(read_file(path));
    return std::visit(
        [&](const auto& pf) {
            auto family = pf.as_form_family();
            if (form >= family.size())
                throw Error(ErrorCode::InvalidArgument, "form index out of range");
            Json body = Json::object();
            body["radical"] = subspace_to_json(radical(family.members[form]));
            return CommandResult{0, std::move(body)};
        },
        parsed);
}

CommandResult run_family_radical(const std::string& path)
{
    AnyFamily parsed = parse_family_text(read_file(path));
    return std::visit(
        [&](const auto& pf) {
            Json body = Json::object();
            body["radical"] = subspace_to_json(family_radical(pf.as_form_family()));
            return CommandResult{0, std::move(body)};
        },
        parsed);
}

CommandResult run_quotient(const std::string& path)
{
    AnyFamily parsed = parse_family_text(read_file(path));
    return std::visit(
        [&](const auto& pf) {
            using S = typename std::decay_t<decltype(pf)>::value_type;
            auto family = pf.as_form_family();
            Subspace<S> rad = family_radical(family);
            ParsedFamily<S> quotient;
            quotient.field = family.field;
            quotient.mode = FamilyMode::Finite;
            quotient.dim = family.dimension() - rad.dimension();
            Matrix<S> section;
            for (const auto& member : family.members) {
                auto q = quotient_by(member, rad);
                section = q.section;
                quotient.forms.push_back(std::move(q.form));
            }
            Json body = Json::object();
            body["family"] = serialize_family(quotient);
            body["section"] = matrix_to_json(section);
            body["radical"] = subspace_to_json(rad);
            return CommandResult{0, std::move(body)};
        },
        parsed);
}

CommandResult run_double_bracket(const std::string& path)
{
    AnyFamily parsed = parse_family_text(read_file(path));
    return std::visit(
        [&](const auto& pf) {
            using S = typename std::decay_t<decltype(pf)>::value_type;
            DoubleBracketForm<S> db =
                pf.mode == FamilyMode::StableTail
                    ? double_bracket(pf.as_stable_tail())
                    : double_bracket(pf.as_form_family());
            Json body = Json::object();
            body["provenance"] = db.provenance == BracketProvenance::StableTail
                                     ? "stable_tail"
                                     : "finite";
            body["gram"] = matrix_to_json(db.gram);
            return CommandResult{0, std::move(body)};
        },
        parsed);
}

CommandResult run_pathological(const std::string& path)
{
    AnyFamily parsed = parse_family_text(read_file(path));
    return std::visit(
        [&](const auto& pf) {
            auto subspace = pf.mode == FamilyMode::StableTail
                                ? pathological_subspace(pf.as_stable_tail())
                                : pathological_subspace(pf.as_form_family());
            Json body = Json::object();
            body["pathological"] = subspace_to_json(subspace);
            body["nonpathological"] = subspace.dimension() == 0;
            return CommandResult{0, std::move(body)};
        },
        parsed);
}

const ParsedFamily<RationalFunction>& require_hyper(const AnyFamily& parsed)
{
    const auto* pf = std::get_if<ParsedFamily<RationalFunction>>(&parsed);
    if (pf == nullptr || pf->mode != FamilyMode::Hyper)
        throw Error(ErrorCode::InvalidArgument,
                    "this subcommand needs a document with mode \"hyper\"");
    return *pf;
}

CommandResult run_st_form(const std::string& path, std::size_t form)
{
    AnyFamily parsed = parse_family_text(read_file(path));
    const auto& pf = require_hyper(parsed);
    if (form >= pf.forms.size())
        throw Error(ErrorCode::InvalidArgument, "form index out of range");
    const BilinearForm<RationalFunction>& f = pf.forms[form];
    Json body = Json::object();
    if (!is_bounded_family(f)) {
        body["bounded"] = false;
        return CommandResult{1, std::move(body)};
    }
    body["bounded"] = true;
    body["st"] = matrix_to_json(Matrix<Rational>(st_form(f)));
    return CommandResult{0, std::move(body)};
}

CommandResult run_wwe_check(const std::string& family_path,
                            const std::string& cert_path, std::size_t form)
{
    AnyFamily parsed = parse_family_text(read_file(family_path));
    const auto& pf = require_hyper(parsed);
    if (form >= pf.forms.size())
        throw Error(ErrorCode::InvalidArgument, "form index out of range");
    std::optional<OrthoCertificate<RationalFunction>> cert;
    if (!cert_path.empty()) {
        Json j;
        try {
            j = Json::parse(read_file(cert_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::ParseError, e.what());
        }
        cert = parse_certificate<RationalFunction>(j, pf.field);
    }
    WweReport report = check_wwe(pf.forms[form], cert);
    Json body = Json::object();
    body["negligible_is_limit_radical"] = report.negligible_is_limit_radical;
    body["robust_implies_nondegenerate"] = report.robust_implies_nondegenerate;
    bool all_true = report.negligible_is_limit_radical &&
                    report.robust_implies_nondegenerate;
    if (report.certificate_diagonalizes_limit.has_value()) {
        body["certificate_diagonalizes_limit"] = *report.certificate_diagonalizes_limit;
        all_true = all_true && *report.certificate_diagonalizes_limit;
    }
    if (report.enlarged_certificate_covers_family.has_value()) {
        body["enlarged_certificate_covers_family"] =
            *report.enlarged_certificate_covers_family;
        all_true = all_true && *report.enlarged_certificate_covers_family;
    }
    return CommandResult{all_true ? 0 : 1, std::move(body)};
}

CommandResult run_verify(const std::string& family_path, const std::string& cert_path)
{
    AnyFamily parsed = parse_family_text(read_file(family_path));
    Json cert_json;
    try {
        cert_json = Json::parse(read_file(cert_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return std::visit(
        [&](const auto& pf) {
            using S = typename std::decay_t<decltype(pf)>::value_type;
            auto cert = parse_certificate<S>(cert_json, pf.field);
            VerifyOutcome outcome = verify_certificate(pf.as_form_family(), cert);
            Json body = Json::object();
            body["accepted"] = outcome.accepted;
            if (!outcome.accepted) body["witness"] = outcome.witness;
            return CommandResult{outcome.accepted ? 0 : 1, std::move(body)};
        },
        parsed);
}

CommandResult run_oracle(const std::string& path)
{
    AnyFamily parsed = parse_family_text(read_file(path));
    const auto* pf = std::get_if<ParsedFamily<GFp>>(&parsed);
    if (pf == nullptr)
        return CommandResult{
            2, error_body(Error(ErrorCode::OutOfBudget,
                                "the exhaustive oracle only runs over GF(p)"))};
    try {
        auto witness = oracle_so(pf->as_form_family());
        Json body = Json::object();
        body["exists"] = witness.has_value();
        if (witness.has_value()) {
            body["basis"] = matrix_to_json(*witness);
            return CommandResult{0, std::move(body)};
        }
        return CommandResult{1, std::move(body)};
    } catch (const Error& e) {
        if (e.code() == ErrorCode::OutOfBudget)
            return CommandResult{2, error_body(e)};
        throw;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact decision toolkit for simultaneous orthogonalization"};
    app.require_subcommand(1);
    int exit_code = 0;

    std::vector<std::string> check_files;
    std::size_t check_budget = 100000;
    auto* check = app.add_subcommand(
        "check", "decide simultaneous orthogonalizability of each family");
    check->add_option("files", check_files, "family documents")->required();
    check->add_option("--budget", check_budget, "combination-search budget");
    check->callback(
        [&] { exit_code = run_guarded([&] { return run_check(check_files, check_budget); }); });

    std::string ortho_file;
    std::size_t ortho_base = 0;
    auto* ortho = app.add_subcommand(
        "orthogonalize", "run the pipeline against a chosen base member");
    ortho->add_option("file", ortho_file, "family document")->required();
    ortho->add_option("--base", ortho_base, "index of the base member");
    ortho->callback(
        [&] { exit_code = run_guarded([&] { return run_orthogonalize(ortho_file, ortho_base); }); });

    std::string combo_file;
    std::size_t combo_budget = 100000;
    auto* combo = app.add_subcommand(
        "combo", "search for a nondegenerate linear combination");
    combo->add_option("file", combo_file, "family document")->required();
    combo->add_option("--budget", combo_budget, "evaluation budget");
    combo->callback(
        [&] { exit_code = run_guarded([&] { return run_combo(combo_file, combo_budget); }); });

    std::string radical_file;
    std::size_t radical_form = 0;
    auto* rad = app.add_subcommand("radical", "radical of one family member");
    rad->add_option("file", radical_file, "family document")->required();
    rad->add_option("--form", radical_form, "member index");
    rad->callback(
        [&] { exit_code = run_guarded([&] { return run_radical(radical_file, radical_form); }); });

    std::string famrad_file;
    auto* famrad = app.add_subcommand(
        "family-radical", "intersection of all member radicals");
    famrad->add_option("file", famrad_file, "family document")->required();
    famrad->callback(
        [&] { exit_code = run_guarded([&] { return run_family_radical(famrad_file); }); });

    std::string quot_file;
    auto* quot = app.add_subcommand(
        "quotient", "quotient every member by the family radical");
    quot->add_option("file", quot_file, "family document")->required();
    quot->callback([&] { exit_code = run_guarded([&] { return run_quotient(quot_file); }); });

    std::string db_file;
    auto* db = app.add_subcommand(
        "double-bracket", "index-averaged form of a finite or stable-tail family");
    db->add_option("file", db_file, "family document")->required();
    db->callback([&] { exit_code = run_guarded([&] { return run_double_bracket(db_file); }); });

    std::string path_file;
    auto* path = app.add_subcommand(
        "pathological", "subspace pairing to zero under the index-averaged form");
    path->add_option("file", path_file, "family document")->required();
    path->callback([&] { exit_code = run_guarded([&] { return run_pathological(path_file); }); });

    std::string st_file;
    std::size_t st_index = 0;
    auto* st = app.add_subcommand(
        "st-form", "standard part of a bounded t-parametrized form");
    st->add_option("file", st_file, "family document (mode \"hyper\")")->required();
    st->add_option("--form", st_index, "form index");
    st->callback([&] { exit_code = run_guarded([&] { return run_st_form(st_file, st_index); }); });

    std::string wwe_file;
    std::string wwe_cert;
    std::size_t wwe_index = 0;
    auto* wwe = app.add_subcommand(
        "wwe-check", "limit-form soundness report for a t-parametrized form");
    wwe->add_option("file", wwe_file, "family document (mode \"hyper\")")->required();
    wwe->add_option("certificate", wwe_cert, "optional certificate document");
    wwe->add_option("--form", wwe_index, "form index");
    wwe->callback(
        [&] { exit_code = run_guarded([&] { return run_wwe_check(wwe_file, wwe_cert, wwe_index); }); });

    std::string verify_family;
    std::string verify_cert;
    auto* verify = app.add_subcommand(
        "verify", "replay a certificate against a family from first principles");
    verify->add_option("family", verify_family, "family document")->required();
    verify->add_option("certificate", verify_cert, "certificate document")->required();
    verify->callback(
        [&] { exit_code = run_guarded([&] { return run_verify(verify_family, verify_cert); }); });

    std::string oracle_file;
    auto* oracle = app.add_subcommand(
        "oracle", "exhaustive search over all congruences (small GF(p) only)");
    oracle->add_option("file", oracle_file, "family document")->required();
    oracle->callback([&] { exit_code = run_guarded([&] { return run_oracle(oracle_file); }); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }
    return exit_code;
}
