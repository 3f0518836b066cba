#pragma once

#include "speccheck/accuracy/domain.hpp"
#include "speccheck/eval/evaluator.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace speccheck::accuracy {

using lang::BehaviorKind;

class InconsistentLabels : public std::runtime_error {
public:
    InconsistentLabels(const Bindings& input, const Bindings& output)
        : std::runtime_error("behavior labeled both good and bad: i=" + input.to_source() + " o=" + output.to_source())
    {
    }
};

// Finite set of behaviors with good/bad/dontCare labels.
class LabeledSet {
public:
    struct Entry {
        Bindings input;
        Bindings output;
        BehaviorKind kind;
    };

    // Adding the same behavior twice with the same label is a no-op; good
    // versus bad throws InconsistentLabels. dontCare never conflicts and
    // never replaces a good/bad label.
    void add(const Bindings& input, const Bindings& output, BehaviorKind kind);

    [[nodiscard]] std::optional<BehaviorKind> find(const Bindings& input, const Bindings& output) const;
    // True when some good or bad behavior has this input.
    [[nodiscard]] bool constrains(const Bindings& input) const { return constrained_inputs_.contains(input); }
    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] std::vector<Entry> entries() const;

private:
    std::map<std::pair<Bindings, Bindings>, BehaviorKind> labels_;
    std::set<Bindings> constrained_inputs_;
};

[[nodiscard]] LabeledSet labeled_from_behaviors(const lang::FunctionDef& f);

// A specification as a pair of three-valued predicates.
class Spec {
public:
    virtual ~Spec() = default;
    [[nodiscard]] virtual eval::TriBool pre(const Bindings& input) const = 0;
    [[nodiscard]] virtual eval::TriBool post(const Bindings& input, const Bindings& output) const = 0;
    // Kleene P => Q.
    [[nodiscard]] eval::TriBool satisfies(const Bindings& input, const Bindings& output) const;
};

// The @pre/@post of a function.
class ManualSpec final : public Spec {
public:
    ManualSpec(const lang::AnnotatedProgram& program, const lang::FunctionDef& f, eval::Budget budget = {})
        : program_(&program), f_(&f), budget_(budget)
    {
    }
    [[nodiscard]] eval::TriBool pre(const Bindings& input) const override;
    [[nodiscard]] eval::TriBool post(const Bindings& input, const Bindings& output) const override;

private:
    const lang::AnnotatedProgram* program_;
    const lang::FunctionDef* f_;
    eval::Budget budget_;
};

// The tightest specification a labeled set determines: P holds on inputs
// with a good or bad behavior, Q on good behaviors.
class TableSpec final : public Spec {
public:
    explicit TableSpec(LabeledSet labels) : labels_(std::move(labels)) {}
    [[nodiscard]] eval::TriBool pre(const Bindings& input) const override;
    [[nodiscard]] eval::TriBool post(const Bindings& input, const Bindings& output) const override;
    [[nodiscard]] const LabeledSet& labels() const noexcept { return labels_; }

private:
    LabeledSet labels_;
};

[[nodiscard]] TableSpec generate_spec(const LabeledSet& labels);

// Labels a behavior from its input and output.
class Labeler {
public:
    virtual ~Labeler() = default;
    [[nodiscard]] virtual BehaviorKind label(const Bindings& input, const Bindings& output) const = 0;
};

// Runs a reference implementation: good when the outputs match, bad
// otherwise. Inputs outside the reference's own @pre, or on which it
// faults, are dontCare.
class ReferenceLabeler final : public Labeler {
public:
    ReferenceLabeler(std::shared_ptr<const lang::AnnotatedProgram> program, std::string function,
                     eval::Budget budget = {});
    [[nodiscard]] BehaviorKind label(const Bindings& input, const Bindings& output) const override;
    // Expected output for `input`, or nothing for a dontCare input.
    [[nodiscard]] std::optional<Bindings> expected(const Bindings& input) const;

private:
    std::shared_ptr<const lang::AnnotatedProgram> program_;
    const lang::FunctionDef* f_;
    eval::Budget budget_;
};

// Loads the domain's reference function; nullptr when none is set.
// Throws DomainError when it cannot be loaded.
[[nodiscard]] std::unique_ptr<ReferenceLabeler> load_reference(const DomainSpec& domain,
                                                               const lang::AnnotatedProgram& fallback,
                                                               eval::Budget budget = {});

enum class AccuracyVerdict { Accurate, UnderConstrained, OverConstrained, Both, Undecidable };

std::string_view to_string(AccuracyVerdict v) noexcept;

struct AccuracyWitness {
    Bindings input;
    Bindings output;
    BehaviorKind kind;
    // Reason when the spec was Undefined on this behavior.
    std::string note;

    friend bool operator<(const AccuracyWitness& a, const AccuracyWitness& b)
    {
        return std::tie(a.input, a.output) < std::tie(b.input, b.output);
    }
};

struct AccuracyReport {
    static constexpr std::size_t witness_cap = 100;

    // Good behaviors the spec rejects.
    std::vector<AccuracyWitness> over;
    // Bad behaviors the spec admits.
    std::vector<AccuracyWitness> under;
    // Good or bad behaviors on which P => Q is Undefined.
    std::vector<AccuracyWitness> undefined;
    std::uint64_t over_count = 0;
    std::uint64_t under_count = 0;
    std::uint64_t undefined_count = 0;
    std::uint64_t checked = 0;
    std::uint64_t dont_care = 0;
    // Stopped at the first witness.
    bool stopped_early = false;

    [[nodiscard]] AccuracyVerdict verdict() const noexcept;
    [[nodiscard]] bool accurate() const noexcept { return verdict() == AccuracyVerdict::Accurate; }

    // Order-insensitive combination of two partial reports.
    void merge(const AccuracyReport& other);
};

// Classifies one labeled behavior into `report`. Returns true when it was
// a witness.
bool classify(const Spec& spec, const Bindings& input, const Bindings& output, BehaviorKind kind,
              AccuracyReport& report);

struct AccuracyOptions {
    bool fail_fast = false;
    // 0 picks the hardware concurrency.
    unsigned threads = 1;
    // Incremented once per classified behavior when set.
    std::atomic<std::uint64_t>* progress = nullptr;
};

[[nodiscard]] AccuracyReport check_accuracy(const Spec& spec, const LabeledSet& labels,
                                            const AccuracyOptions& options = {});
[[nodiscard]] AccuracyReport check_accuracy(const Spec& spec, const BoundDomain& domain, const Labeler& labeler,
                                            const AccuracyOptions& options = {});

struct SpecDiff {
    // Behaviors where exactly one spec has P => Q true.
    std::vector<AccuracyWitness> only_first;
    std::vector<AccuracyWitness> only_second;
    std::uint64_t only_first_count = 0;
    std::uint64_t only_second_count = 0;
    // Either side Undefined.
    std::uint64_t undefined_count = 0;
    std::uint64_t checked = 0;

    [[nodiscard]] bool equivalent() const noexcept
    {
        return only_first_count == 0 && only_second_count == 0 && undefined_count == 0;
    }
};

[[nodiscard]] SpecDiff compare_specs(const Spec& first, const Spec& second, const BoundDomain& domain);

} // namespace speccheck::accuracy
