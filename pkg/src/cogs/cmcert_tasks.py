from src.config import TRUNCATION_ORDER
from src.errors import ConsistencyError, NontrivialityNotCertifiedError
from src.mechanics.cmcert import (HilbertSeries, copies_bound, defect_certificate, free_module_check, gorenstein_check,
                                  hilbert_series, regular_rep_bound)
from src.runner import DONE, FAIL, PASS, TaskCog, TaskContext, TaskResult, task
from src.scenario import split_list


def _series_matcher(series: HilbertSeries):
    # an unreadable expect raises ScenarioParseError and the task reports an error
    def matches(text: str) -> bool:
        return HilbertSeries.parse(text) == series
    return matches


class CertificateTasks(TaskCog):
    @task("hilbert", keys=("A",))
    def hilbert(self, ctx: TaskContext) -> TaskResult:
        A = ctx.scenario.algebra(ctx.args.first("A"), ctx.spec.line)
        series = hilbert_series(A)
        expansion = series.expand(TRUNCATION_ORDER)
        if any(c < 0 for c in expansion):
            raise ConsistencyError(f"negative coefficient in the expansion of {series}")
        return TaskResult("hilbert", ctx.spec.label, DONE, str(series), details={"expansion": expansion[:13]},
                          matcher=_series_matcher(series))

    @task("free-module", keys=("A", "hsop", "gens"))
    def free_module(self, ctx: TaskContext) -> TaskResult:
        line = ctx.spec.line
        A = ctx.scenario.algebra(ctx.args.require("A"), line)
        hsop = [A.tag(t) for t in split_list(ctx.args.require("hsop"))]
        gens = [A.tag(t) for t in split_list(ctx.args.require("gens"))]
        verdict = free_module_check(A, hsop, gens, degree_cap=ctx.options.degree_cap)
        details = {"hilbert_identity": verdict.hilbert_identity, "expected": verdict.expected,
                   "observed": verdict.observed}
        if verdict.generation is not None:
            details["generation"] = verdict.generation
        return TaskResult("free-module", ctx.spec.label, PASS if verdict.free else FAIL,
                          "true" if verdict.free else "false", witness=verdict.failing_product, details=details)

    @task("gorenstein", keys=("A", "dimA", "dimV"))
    def gorenstein(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        A = s.algebra(ctx.args.first("A"), ctx.spec.line)
        series = hilbert_series(A)
        dim_a = ctx.args.integer("dimA", series.dimension())
        verdict = gorenstein_check(series, dim_a, ctx.args.integer("dimV", s.ring.nvars))
        if not verdict.gorenstein:
            return TaskResult("gorenstein", ctx.spec.label, FAIL, "none")
        return TaskResult("gorenstein", ctx.spec.label, PASS, str(verdict.a),
                          details={"dimA": dim_a, "strongly_gorenstein": verdict.strongly})

    @task("certificate", keys=("g", "ann", "heuristic"))
    def certificate(self, ctx: TaskContext) -> TaskResult:
        s, line = ctx.scenario, ctx.spec.line
        g = s.cocycle(ctx.args.first("g"), line)
        ann = s.polys(ctx.args.require("ann"), line)
        heuristic = ctx.options.heuristic or ctx.args.get("heuristic", "no").lower() in ("yes", "true", "1")
        try:
            cert = defect_certificate(s.group, g, ann, heuristic, ctx.options.mmax, ctx.options.degree_cap)
        except NontrivialityNotCertifiedError as e:
            return TaskResult("certificate", ctx.spec.label, FAIL, "refused", details={"reason": str(e)})
        details = cert.to_dict()
        return TaskResult("certificate", ctx.spec.label, PASS, str(cert.bound), details=details)

    @task("regular-bound")
    def regular_bound(self, ctx: TaskContext) -> TaskResult:
        report = regular_rep_bound(ctx.scenario.group)
        return self._bound("regular-bound", ctx, report)

    @task("copies-bound", keys=("k",))
    def copies(self, ctx: TaskContext) -> TaskResult:
        report = copies_bound(ctx.scenario.group, ctx.args.integer("k", 1))
        return self._bound("copies-bound", ctx, report)

    @staticmethod
    def _bound(kind: str, ctx: TaskContext, report) -> TaskResult:
        details = dict(report.evidence)
        if report.conclusion:
            details["conclusion"] = report.conclusion
        if report.bound is None:
            return TaskResult(kind, ctx.spec.label, FAIL, "none", details=details)
        return TaskResult(kind, ctx.spec.label, DONE, str(report.bound), details=details)


def setup(runner):
    runner.add_cog(CertificateTasks(runner))
