#include "speccheck/accuracy/accuracy.hpp"

#include "speccheck/lang/parser.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace speccheck::accuracy {

using eval::TriBool;

void LabeledSet::add(const Bindings& input, const Bindings& output, BehaviorKind kind)
{
    auto key = std::make_pair(input, output);
    auto it = labels_.find(key);
    if (it == labels_.end()) {
        labels_.emplace(std::move(key), kind);
    } else if (it->second == BehaviorKind::DontCare) {
        it->second = kind;
    } else if (kind != BehaviorKind::DontCare && kind != it->second) {
        throw InconsistentLabels(input, output);
    }
    if (kind != BehaviorKind::DontCare)
        constrained_inputs_.insert(input);
}

std::optional<BehaviorKind> LabeledSet::find(const Bindings& input, const Bindings& output) const
{
    auto it = labels_.find(std::make_pair(input, output));
    if (it == labels_.end())
        return std::nullopt;
    return it->second;
}

std::vector<LabeledSet::Entry> LabeledSet::entries() const
{
    std::vector<Entry> out;
    out.reserve(labels_.size());
    for (const auto& [key, kind] : labels_)
        out.push_back({key.first, key.second, kind});
    return out;
}

LabeledSet labeled_from_behaviors(const lang::FunctionDef& f)
{
    LabeledSet set;
    for (const auto& b : f.behaviors)
        set.add(b.input, b.output, b.kind);
    return set;
}

TriBool Spec::satisfies(const Bindings& input, const Bindings& output) const
{
    TriBool p = pre(input);
    if (p.is_false())
        return TriBool::truth();
    TriBool q = post(input, output);
    if (q.is_true())
        return q;
    if (p.is_undefined())
        return p;
    return q;
}

TriBool ManualSpec::pre(const Bindings& input) const
{
    return eval::eval_pre(*program_, *f_, input, budget_).value;
}

TriBool ManualSpec::post(const Bindings& input, const Bindings& output) const
{
    return eval::eval_post(*program_, *f_, input, output, budget_).value;
}

TriBool TableSpec::pre(const Bindings& input) const
{
    return TriBool::of(labels_.constrains(input));
}

TriBool TableSpec::post(const Bindings& input, const Bindings& output) const
{
    return TriBool::of(labels_.find(input, output) == BehaviorKind::Good);
}

TableSpec generate_spec(const LabeledSet& labels)
{
    return TableSpec(labels);
}

ReferenceLabeler::ReferenceLabeler(std::shared_ptr<const lang::AnnotatedProgram> program, std::string function,
                                   eval::Budget budget)
    : program_(std::move(program)), f_(program_->find(function)), budget_(budget)
{
    if (!f_)
        throw DomainError("reference function '" + function + "' not found");
    if (f_->spec_only())
        throw DomainError("reference function '" + function + "' has no body");
}

std::optional<Bindings> ReferenceLabeler::expected(const Bindings& input) const
{
    if (f_->pre && !eval::eval_pre(*program_, *f_, input, budget_).value.is_true())
        return std::nullopt;
    auto outcome = eval::exec_function(*program_, *f_, input, budget_);
    if (const auto* r = std::get_if<eval::Returned>(&outcome))
        return eval::outputs_of(*f_, input, *r);
    return std::nullopt;
}

BehaviorKind ReferenceLabeler::label(const Bindings& input, const Bindings& output) const
{
    auto want = expected(input);
    if (!want)
        return BehaviorKind::DontCare;
    // Compare only the variables the domain enumerates; an unchanged array
    // is not part of either side.
    for (const auto& [name, v] : *want)
        if (const Value* got = output.find(name); !got || *got != v)
            return BehaviorKind::Bad;
    for (const auto& [name, v] : output)
        if (!want->contains(name))
            return BehaviorKind::Bad;
    return BehaviorKind::Good;
}

std::unique_ptr<ReferenceLabeler> load_reference(const DomainSpec& domain, const lang::AnnotatedProgram& fallback,
                                                 eval::Budget budget)
{
    if (!domain.reference)
        return nullptr;
    std::shared_ptr<const lang::AnnotatedProgram> program;
    if (domain.reference->file.empty()) {
        program = std::make_shared<lang::AnnotatedProgram>(fallback);
    } else {
        std::ifstream in(domain.reference->file);
        if (!in)
            throw DomainError("cannot read reference file " + domain.reference->file.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        try {
            program = std::make_shared<lang::AnnotatedProgram>(lang::parse_source(ss.str()));
        } catch (const std::exception& e) {
            throw DomainError("reference file " + domain.reference->file.string() + ": " + e.what());
        }
    }
    return std::make_unique<ReferenceLabeler>(std::move(program), domain.reference->function, budget);
}

std::string_view to_string(AccuracyVerdict v) noexcept
{
    switch (v) {
    case AccuracyVerdict::Accurate: return "accurate";
    case AccuracyVerdict::UnderConstrained: return "under-constrained";
    case AccuracyVerdict::OverConstrained: return "over-constrained";
    case AccuracyVerdict::Both: return "both";
    case AccuracyVerdict::Undecidable: return "undecidable-at-this-domain";
    }
    return "?";
}

AccuracyVerdict AccuracyReport::verdict() const noexcept
{
    if (over_count > 0 && under_count > 0)
        return AccuracyVerdict::Both;
    if (over_count > 0)
        return AccuracyVerdict::OverConstrained;
    if (under_count > 0)
        return AccuracyVerdict::UnderConstrained;
    if (undefined_count > 0)
        return AccuracyVerdict::Undecidable;
    return AccuracyVerdict::Accurate;
}

namespace {

void keep_smallest(std::vector<AccuracyWitness>& v)
{
    std::sort(v.begin(), v.end());
    if (v.size() > AccuracyReport::witness_cap)
        v.resize(AccuracyReport::witness_cap);
}

void record(std::vector<AccuracyWitness>& list, std::uint64_t& count, AccuracyWitness w)
{
    ++count;
    // Keep the list bounded while streaming; sorted truncation happens at
    // merge time, so retain twice the cap before trimming.
    list.push_back(std::move(w));
    if (list.size() >= 2 * AccuracyReport::witness_cap)
        keep_smallest(list);
}

} // namespace

void AccuracyReport::merge(const AccuracyReport& other)
{
    over.insert(over.end(), other.over.begin(), other.over.end());
    under.insert(under.end(), other.under.begin(), other.under.end());
    undefined.insert(undefined.end(), other.undefined.begin(), other.undefined.end());
    keep_smallest(over);
    keep_smallest(under);
    keep_smallest(undefined);
    over_count += other.over_count;
    under_count += other.under_count;
    undefined_count += other.undefined_count;
    checked += other.checked;
    dont_care += other.dont_care;
    stopped_early = stopped_early || other.stopped_early;
}

bool classify(const Spec& spec, const Bindings& input, const Bindings& output, BehaviorKind kind,
              AccuracyReport& report)
{
    ++report.checked;
    if (kind == BehaviorKind::DontCare) {
        ++report.dont_care;
        return false;
    }
    const TriBool sat = spec.satisfies(input, output);
    if (sat.is_undefined()) {
        record(report.undefined, report.undefined_count, {input, output, kind, sat.to_string()});
        return true;
    }
    if (kind == BehaviorKind::Good && sat.is_false()) {
        record(report.over, report.over_count, {input, output, kind, {}});
        return true;
    }
    if (kind == BehaviorKind::Bad && sat.is_true()) {
        record(report.under, report.under_count, {input, output, kind, {}});
        return true;
    }
    return false;
}

namespace {

void finish(AccuracyReport& r)
{
    keep_smallest(r.over);
    keep_smallest(r.under);
    keep_smallest(r.undefined);
}

unsigned worker_count(const AccuracyOptions& options)
{
    if (options.fail_fast)
        return 1;
    unsigned n = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
    return std::max(1u, n);
}

} // namespace

AccuracyReport check_accuracy(const Spec& spec, const LabeledSet& labels, const AccuracyOptions& options)
{
    AccuracyReport report;
    eval::run_on_deep_stack([&] {
        for (const auto& e : labels.entries()) {
            const bool witness = classify(spec, e.input, e.output, e.kind, report);
            if (options.progress)
                options.progress->fetch_add(1, std::memory_order_relaxed);
            if (witness && options.fail_fast) {
                report.stopped_early = true;
                break;
            }
        }
    });
    finish(report);
    return report;
}

AccuracyReport check_accuracy(const Spec& spec, const BoundDomain& domain, const Labeler& labeler,
                              const AccuracyOptions& options)
{
    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(worker_count(options), std::max<std::uint64_t>(1, domain.input_count())));
    std::vector<AccuracyReport> parts(workers);
    std::vector<std::exception_ptr> errors(workers);

    auto run_part = [&](unsigned k) {
        const std::uint64_t n = domain.input_count();
        const std::uint64_t first = n * k / workers;
        const std::uint64_t last = n * (k + 1) / workers;
        try {
            eval::run_on_deep_stack([&] {
                enumerate(
                    domain,
                    [&](const Bindings& in, const Bindings& out) {
                        const bool witness = classify(spec, in, out, labeler.label(in, out), parts[k]);
                        if (options.progress)
                            options.progress->fetch_add(1, std::memory_order_relaxed);
                        if (witness && options.fail_fast) {
                            parts[k].stopped_early = true;
                            return false;
                        }
                        return true;
                    },
                    first, last);
            });
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };

    if (workers == 1) {
        run_part(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < workers; ++k)
            pool.emplace_back(run_part, k);
        for (auto& t : pool)
            t.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    AccuracyReport report;
    for (const auto& p : parts)
        report.merge(p);
    return report;
}

SpecDiff compare_specs(const Spec& first, const Spec& second, const BoundDomain& domain)
{
    SpecDiff diff;
    eval::run_on_deep_stack([&] {
        enumerate(domain, [&](const Bindings& in, const Bindings& out) {
            ++diff.checked;
            const TriBool a = first.satisfies(in, out);
            const TriBool b = second.satisfies(in, out);
            if (a.is_undefined() || b.is_undefined()) {
                ++diff.undefined_count;
            } else if (a.is_true() && b.is_false()) {
                ++diff.only_first_count;
                if (diff.only_first.size() < AccuracyReport::witness_cap)
                    diff.only_first.push_back({in, out, BehaviorKind::DontCare, {}});
            } else if (a.is_false() && b.is_true()) {
                ++diff.only_second_count;
                if (diff.only_second.size() < AccuracyReport::witness_cap)
                    diff.only_second.push_back({in, out, BehaviorKind::DontCare, {}});
            }
            return true;
        });
    });
    return diff;
}

} // namespace speccheck::accuracy
