from src.config import INSEPARABLE_MMAX
from src.mechanics.separating import geometric_separating_test, inseparable_closure_test, separates_points
from src.runner import TaskCog, TaskContext, TaskResult, task


def _from_verdict(kind: str, label: str, verdict) -> TaskResult:
    return TaskResult(kind, label, verdict.result, verdict.result, witness=verdict.witness, details=dict(verdict.details))


class SeparatingTasks(TaskCog):
    @task("separates", keys=("S", "e"))
    def separates(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        S = s.polys(ctx.args.first("S"), ctx.spec.line)
        verdict = separates_points(s.group, s.ring, S, ctx.args.integer("e", 1))
        return _from_verdict("separates", ctx.spec.label, verdict)

    @task("geometric", keys=("S", "points"))
    def geometric(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        S = s.polys(ctx.args.first("S"), ctx.spec.line)
        point_check = ctx.args.get("points", "yes").lower() not in ("no", "false", "0")
        verdict = geometric_separating_test(s.group, s.ring, S, ctx.options.degree_cap, point_check)
        return _from_verdict("geometric", ctx.spec.label, verdict)

    @task("inseparable", keys=("S", "H", "mmax"))
    def inseparable(self, ctx: TaskContext) -> TaskResult:
        s, line = ctx.scenario, ctx.spec.line
        S = s.polys(ctx.args.first("S"), line)
        H = s.polys(ctx.args.require("H"), line)
        verdict = inseparable_closure_test(S, H, ctx.args.integer("mmax", INSEPARABLE_MMAX), s.group, ctx.options.degree_cap)
        return _from_verdict("inseparable", ctx.spec.label, verdict)


def setup(runner):
    runner.add_cog(SeparatingTasks(runner))
