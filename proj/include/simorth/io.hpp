#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "simorth/error.hpp"
#include "simorth/family.hpp"
#include "simorth/fields.hpp"
#include "simorth/pipeline.hpp"
#include "simorth/ultrafilter.hpp"

namespace simorth {

/**
 * All documents are built and consumed as insertion-ordered JSON so key
 * order is canonical: identical data always serializes to identical bytes.
 */
using Json = nlohmann::ordered_json;

enum class FamilyMode { Finite, StableTail, Hyper };

inline const char* family_mode_name(FamilyMode m)
{
    switch (m) {
        case FamilyMode::Finite: return "finite";
        case FamilyMode::StableTail: return "stable_tail";
        case FamilyMode::Hyper: return "hyper";
    }
    return "finite";
}

namespace detail {

[[noreturn]] inline void bad_document(const std::string& where, const std::string& what)
{
    throw Error(ErrorCode::ParseError, where + ": " + what);
}

inline const Json& need(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        bad_document(where, std::string("missing required key \"") + key + "\"");
    return j.at(key);
}

inline Eigen::Index need_index(const Json& j, const char* key, const std::string& where)
{
    const Json& v = need(j, key, where);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        bad_document(where + "." + key, "expected a non-negative integer");
    return static_cast<Eigen::Index>(v.get<long long>());
}

} // namespace detail

inline Json field_to_json(const FieldDescriptor& d)
{
    Json j = Json::object();
    switch (d.kind) {
        case FieldKind::Rationals: j["kind"] = "Q"; break;
        case FieldKind::PrimeField:
            j["kind"] = "GF";
            j["p"] = d.p;
            break;
        case FieldKind::RationalFunctions: j["kind"] = "Qt"; break;
    }
    return j;
}

inline FieldDescriptor field_from_json(const Json& j, const std::string& where)
{
    const Json& kind = detail::need(j, "kind", where);
    if (!kind.is_string())
        detail::bad_document(where + ".kind", "expected \"Q\", \"GF\" or \"Qt\"");
    const std::string name = kind.get<std::string>();
    if (name == "Q") return FieldDescriptor::rationals();
    if (name == "Qt") return FieldDescriptor::rational_functions();
    if (name == "GF") {
        const Json& p = detail::need(j, "p", where);
        if (!p.is_number_integer() || p.get<long long>() < 2)
            detail::bad_document(where + ".p", "expected a prime >= 2");
        return FieldDescriptor::prime_field(p.get<long long>());
    }
    detail::bad_document(where + ".kind", "unknown field kind \"" + name + "\"");
}

/** Serializes a matrix as rows of exact scalar strings, never numbers. */
template <typename Scalar>
Json matrix_to_json(const Matrix<Scalar>& m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(ScalarTraits<Scalar>::print(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename Scalar>
Matrix<Scalar> matrix_from_json(const Json& j, const FieldDescriptor& d,
                                const std::string& where)
{
    if (!j.is_array())
        detail::bad_document(where, "expected an array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = 0;
    if (rows > 0) {
        if (!j.at(0).is_array())
            detail::bad_document(where + "[0]", "expected an array of entries");
        cols = static_cast<Eigen::Index>(j.at(0).size());
    }
    Matrix<Scalar> m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = j.at(static_cast<std::size_t>(r));
        const std::string row_where = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            detail::bad_document(row_where, "ragged matrix row");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Json& cell = row.at(static_cast<std::size_t>(c));
            if (!cell.is_string())
                detail::bad_document(row_where + "[" + std::to_string(c) + "]",
                                     "matrix entries must be exact strings");
            try {
                m(r, c) = ScalarTraits<Scalar>::parse(d, cell.get<std::string>());
            } catch (const Error& e) {
                detail::bad_document(row_where + "[" + std::to_string(c) + "]",
                                     e.what());
            }
        }
    }
    return m;
}

template <typename Scalar>
Json subspace_to_json(const Subspace<Scalar>& s)
{
    Json j = Json::object();
    j["dimension"] = static_cast<long long>(s.dimension());
    j["basis"] = matrix_to_json(s.basis());
    return j;
}

/**
 * One parsed family document: the shared field, the declared mode, the
 * listed forms (family members in finite mode, the prefix in stable-tail
 * mode, the t-dependent forms in hyper mode) and the tail form when the
 * mode has one.
 */
template <typename Scalar>
struct ParsedFamily {
    using value_type = Scalar;

    FieldDescriptor field;
    FamilyMode mode = FamilyMode::Finite;
    Eigen::Index dim = 0;
    std::vector<BilinearForm<Scalar>> forms;
    std::optional<BilinearForm<Scalar>> tail;

    /** The finite family the decision pipeline consumes; for stable-tail
     *  data this is the prefix extended by the tail. */
    FormFamily<Scalar> as_form_family() const
    {
        if (mode == FamilyMode::StableTail)
            return to_form_family(as_stable_tail());
        return FormFamily<Scalar>(field, forms);
    }

    StableTailFamily<Scalar> as_stable_tail() const
    {
        if (mode != FamilyMode::StableTail || !tail.has_value())
            throw Error(ErrorCode::InvalidArgument,
                        "document does not carry stable-tail data");
        return StableTailFamily<Scalar>(field, forms, *tail);
    }
};

using AnyFamily = std::variant<ParsedFamily<Rational>, ParsedFamily<GFp>,
                               ParsedFamily<RationalFunction>>;

namespace detail {

template <typename Scalar>
ParsedFamily<Scalar> parse_family_typed(const Json& j, const FieldDescriptor& d,
                                        FamilyMode mode)
{
    ParsedFamily<Scalar> out;
    out.field = d;
    out.mode = mode;
    out.dim = need_index(j, "dim", "document");

    const Json& forms = need(j, "forms", "document");
    if (!forms.is_array())
        bad_document("document.forms", "expected an array of matrices");
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const std::string where = "document.forms[" + std::to_string(i) + "]";
        Matrix<Scalar> m = matrix_from_json<Scalar>(forms.at(i), d, where);
        if (m.rows() != out.dim || m.cols() != out.dim)
            bad_document(where, "expected a " + std::to_string(out.dim) + "x" +
                                    std::to_string(out.dim) + " matrix");
        try {
            out.forms.emplace_back(std::move(m));
        } catch (const Error& e) {
            bad_document(where, e.what());
        }
    }

    if (j.contains("tail")) {
        if (mode != FamilyMode::StableTail)
            bad_document("document.tail", "a tail is only valid in stable_tail mode");
        Matrix<Scalar> m = matrix_from_json<Scalar>(j.at("tail"), d, "document.tail");
        if (m.rows() != out.dim || m.cols() != out.dim)
            bad_document("document.tail", "tail dimension disagrees with dim");
        try {
            out.tail = BilinearForm<Scalar>(std::move(m));
        } catch (const Error& e) {
            bad_document("document.tail", e.what());
        }
    }

    if (mode == FamilyMode::StableTail && !out.tail.has_value())
        bad_document("document", "stable_tail mode requires a tail matrix");
    if (mode != FamilyMode::StableTail && out.forms.empty())
        bad_document("document.forms", "at least one form is required");
    return out;
}

} // namespace detail

/** Parses one family document that has already been read as JSON. */
inline AnyFamily parse_family(const Json& j)
{
    if (!j.is_object())
        detail::bad_document("document", "expected a JSON object");
    const Json& schema = detail::need(j, "schema", "document");
    if (!schema.is_number_integer() || schema.get<long long>() != 1)
        detail::bad_document("document.schema", "unsupported schema version");

    FieldDescriptor d = field_from_json(detail::need(j, "field", "document"),
                                        "document.field");

    FamilyMode mode = FamilyMode::Finite;
    if (j.contains("mode")) {
        const Json& m = j.at("mode");
        if (!m.is_string())
            detail::bad_document("document.mode",
                                 "expected \"finite\", \"stable_tail\" or \"hyper\"");
        const std::string name = m.get<std::string>();
        if (name == "finite")
            mode = FamilyMode::Finite;
        else if (name == "stable_tail")
            mode = FamilyMode::StableTail;
        else if (name == "hyper")
            mode = FamilyMode::Hyper;
        else
            detail::bad_document("document.mode", "unknown mode \"" + name + "\"");
    }
    if (mode == FamilyMode::Hyper && d.kind != FieldKind::RationalFunctions)
        detail::bad_document("document.mode", "hyper mode requires field kind \"Qt\"");

    switch (d.kind) {
        case FieldKind::Rationals:
            return detail::parse_family_typed<Rational>(j, d, mode);
        case FieldKind::PrimeField:
            return detail::parse_family_typed<GFp>(j, d, mode);
        case FieldKind::RationalFunctions:
            return detail::parse_family_typed<RationalFunction>(j, d, mode);
    }
    detail::bad_document("document.field", "unsupported field kind");
}

/**
 * Parses a family document from raw text. Syntax errors surface as
 * ParseError carrying the tokenizer's line/column diagnostic; semantic
 * errors carry the JSON path of the offending value.
 */
inline AnyFamily parse_family_text(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return parse_family(j);
}

template <typename Scalar>
Json serialize_family(const ParsedFamily<Scalar>& f)
{
    Json j = Json::object();
    j["schema"] = 1;
    j["field"] = field_to_json(f.field);
    j["dim"] = static_cast<long long>(f.dim);
    j["mode"] = family_mode_name(f.mode);
    Json forms = Json::array();
    for (const auto& form : f.forms) forms.push_back(matrix_to_json(form.gram()));
    j["forms"] = std::move(forms);
    if (f.tail.has_value()) j["tail"] = matrix_to_json(f.tail->gram());
    return j;
}

/** Wraps a plain finite family as a serializable document. */
template <typename Scalar>
ParsedFamily<Scalar> as_document(const FormFamily<Scalar>& family)
{
    ParsedFamily<Scalar> out;
    out.field = family.field;
    out.mode = FamilyMode::Finite;
    out.dim = family.dimension();
    out.forms = family.members;
    return out;
}

template <typename Scalar>
Json serialize_certificate(const OrthoCertificate<Scalar>& cert)
{
    Json j = Json::object();
    j["schema"] = 1;
    j["basis"] = matrix_to_json(cert.basis);
    Json diagonals = Json::array();
    for (const auto& d : cert.diagonals) {
        Json entries = Json::array();
        for (Eigen::Index i = 0; i < d.size(); ++i)
            entries.push_back(ScalarTraits<Scalar>::print(d(i)));
        diagonals.push_back(std::move(entries));
    }
    j["diagonals"] = std::move(diagonals);
    Json roots = Json::array();
    for (const auto& root : cert.roots) {
        Json r = Json::object();
        Json values = Json::array();
        for (const auto& v : root.values)
            values.push_back(ScalarTraits<Scalar>::print(v));
        r["values"] = std::move(values);
        r["basis"] = matrix_to_json(root.space.basis());
        roots.push_back(std::move(r));
    }
    j["roots"] = std::move(roots);
    j["scalars"] = matrix_to_json(cert.scalars);
    j["radical_tail"] = static_cast<long long>(cert.radical_tail);
    if (cert.combination.has_value()) {
        Json combination = Json::array();
        for (const auto& c : *cert.combination)
            combination.push_back(ScalarTraits<Scalar>::print(c));
        j["combination"] = std::move(combination);
    }
    if (cert.base_index.has_value())
        j["base_index"] = static_cast<long long>(*cert.base_index);
    return j;
}

template <typename Scalar>
OrthoCertificate<Scalar> parse_certificate(const Json& j, const FieldDescriptor& d)
{
    if (!j.is_object())
        detail::bad_document("certificate", "expected a JSON object");
    OrthoCertificate<Scalar> cert;
    cert.basis = matrix_from_json<Scalar>(detail::need(j, "basis", "certificate"), d,
                                          "certificate.basis");

    const Json& diagonals = detail::need(j, "diagonals", "certificate");
    if (!diagonals.is_array())
        detail::bad_document("certificate.diagonals", "expected an array");
    for (std::size_t i = 0; i < diagonals.size(); ++i) {
        const std::string where = "certificate.diagonals[" + std::to_string(i) + "]";
        const Json& entries = diagonals.at(i);
        if (!entries.is_array())
            detail::bad_document(where, "expected an array of strings");
        Vector<Scalar> v(static_cast<Eigen::Index>(entries.size()));
        for (std::size_t k = 0; k < entries.size(); ++k) {
            if (!entries.at(k).is_string())
                detail::bad_document(where, "diagonal entries must be strings");
            v(static_cast<Eigen::Index>(k)) =
                ScalarTraits<Scalar>::parse(d, entries.at(k).get<std::string>());
        }
        cert.diagonals.push_back(std::move(v));
    }

    if (j.contains("roots")) {
        const Json& roots = j.at("roots");
        if (!roots.is_array())
            detail::bad_document("certificate.roots", "expected an array");
        for (std::size_t i = 0; i < roots.size(); ++i) {
            const std::string where = "certificate.roots[" + std::to_string(i) + "]";
            const Json& r = roots.at(i);
            RootDatum<Scalar> datum;
            const Json& values = detail::need(r, "values", where);
            if (!values.is_array())
                detail::bad_document(where + ".values", "expected an array");
            for (const auto& v : values) {
                if (!v.is_string())
                    detail::bad_document(where + ".values", "values must be strings");
                datum.values.push_back(
                    ScalarTraits<Scalar>::parse(d, v.get<std::string>()));
            }
            datum.space = Subspace<Scalar>::from_columns(matrix_from_json<Scalar>(
                detail::need(r, "basis", where), d, where + ".basis"));
            cert.roots.push_back(std::move(datum));
        }
    }

    if (j.contains("scalars"))
        cert.scalars = matrix_from_json<Scalar>(j.at("scalars"), d,
                                                "certificate.scalars");
    cert.radical_tail = detail::need_index(j, "radical_tail", "certificate");

    if (j.contains("combination")) {
        const Json& combination = j.at("combination");
        if (!combination.is_array())
            detail::bad_document("certificate.combination", "expected an array");
        std::vector<Scalar> coefficients;
        for (const auto& c : combination) {
            if (!c.is_string())
                detail::bad_document("certificate.combination",
                                     "coefficients must be strings");
            coefficients.push_back(ScalarTraits<Scalar>::parse(d, c.get<std::string>()));
        }
        cert.combination = std::move(coefficients);
    }
    if (j.contains("base_index")) {
        const Json& b = j.at("base_index");
        if (!b.is_number_integer() || b.get<long long>() < 0)
            detail::bad_document("certificate.base_index",
                                 "expected a non-negative integer");
        cert.base_index = static_cast<std::size_t>(b.get<long long>());
    }
    return cert;
}

template <typename Scalar>
Json serialize_failure(const PipelineFailure<Scalar>& failure)
{
    Json j = Json::object();
    j["kind"] = pipeline_failure_name(failure.kind);
    if (failure.member.has_value())
        j["member"] = static_cast<long long>(*failure.member);
    j["piece"] = subspace_to_json(failure.piece);
    j["detail"] = failure.detail;
    return j;
}

template <typename Scalar>
Json serialize_outcome(const CheckOutcome<Scalar>& outcome)
{
    Json j = Json::object();
    switch (outcome.verdict) {
        case CheckVerdict::Certified:
            j["verdict"] = "certified";
            j["certificate"] = serialize_certificate(*outcome.certificate);
            break;
        case CheckVerdict::NotOrthogonalizable:
            j["verdict"] = "not_orthogonalizable";
            j["failure"] = serialize_failure(*outcome.failure);
            break;
        case CheckVerdict::Indeterminate:
            j["verdict"] = "indeterminate";
            j["reason"] = outcome.reason;
            break;
    }
    return j;
}

/** Result of replaying a certificate against a family. */
struct VerifyOutcome {
    bool accepted = false;
    Json witness;  // first violation found, empty object when accepted
};

/**
 * Soundness replay: re-checks a claimed certificate against a family from
 * first principles — the basis must be square and invertible, every
 * congruent Gram matrix diagonal with exactly the listed diagonal, and
 * the radical-tail columns must lie in the family radical. On rejection
 * the witness names the first violated condition and its location.
 */
template <typename Scalar>
VerifyOutcome verify_certificate(const FormFamily<Scalar>& family,
                                 const OrthoCertificate<Scalar>& cert)
{
    VerifyOutcome out;
    out.witness = Json::object();
    const Eigen::Index n = family.dimension();

    if (cert.basis.rows() != n || cert.basis.cols() != n) {
        out.witness["kind"] = "basis_shape_mismatch";
        return out;
    }
    if (!is_invertible(cert.basis)) {
        out.witness["kind"] = "basis_not_invertible";
        return out;
    }
    if (cert.diagonals.size() != family.size()) {
        out.witness["kind"] = "diagonals_count_mismatch";
        return out;
    }
    for (std::size_t i = 0; i < family.size(); ++i) {
        Matrix<Scalar> d = congruent_gram(family.members[i].gram(), cert.basis);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c)
                if (r != c && !d(r, c).is_zero()) {
                    out.witness["kind"] = "diagonal_violation";
                    out.witness["member"] = static_cast<long long>(i);
                    out.witness["row"] = static_cast<long long>(r);
                    out.witness["col"] = static_cast<long long>(c);
                    out.witness["value"] = ScalarTraits<Scalar>::print(d(r, c));
                    return out;
                }
        if (cert.diagonals[i].size() != n) {
            out.witness["kind"] = "diagonal_length_mismatch";
            out.witness["member"] = static_cast<long long>(i);
            return out;
        }
        for (Eigen::Index r = 0; r < n; ++r)
            if (!(d(r, r) == cert.diagonals[i](r))) {
                out.witness["kind"] = "diagonal_mismatch";
                out.witness["member"] = static_cast<long long>(i);
                out.witness["index"] = static_cast<long long>(r);
                return out;
            }
    }
    if (cert.radical_tail < 0 || cert.radical_tail > n) {
        out.witness["kind"] = "radical_tail_out_of_range";
        return out;
    }
    if (cert.radical_tail > 0) {
        Subspace<Scalar> rad = family_radical(family);
        Subspace<Scalar> tail = Subspace<Scalar>::from_columns(
            Matrix<Scalar>(cert.basis.rightCols(cert.radical_tail)));
        if (!rad.contains(tail)) {
            out.witness["kind"] = "radical_tail_not_in_radical";
            return out;
        }
    }
    out.accepted = true;
    return out;
}

} // namespace simorth
