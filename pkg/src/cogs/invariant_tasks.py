from src.mechanics.invariant import invariant_basis, is_invariant, noether_separating_set, transfer
from src.mechanics.separating import geometric_separating_test
from src.runner import DONE, FAIL, PASS, TaskCog, TaskContext, TaskResult, task


class InvariantTasks(TaskCog):
    @task("is-invariant")
    def invariance(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        for f in s.polys(ctx.args.first(), ctx.spec.line):
            if not is_invariant(s.group, f):
                return TaskResult("is-invariant", ctx.spec.label, FAIL, "false", witness=str(f))
        return TaskResult("is-invariant", ctx.spec.label, PASS, "true")

    @task("invariant-basis", keys=("degree",))
    def basis(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        d = ctx.args.integer("degree")
        if d is None:
            d = int(ctx.args.first())
        result = invariant_basis(s.group, s.ring, d)
        return TaskResult("invariant-basis", ctx.spec.label, DONE, str(result.dim),
                          details={"basis": [str(f) for f in result.basis]})

    @task("transfer")
    def transfer_sum(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        f = s.poly(ctx.args.first(), ctx.spec.line)
        return TaskResult("transfer", ctx.spec.label, DONE, str(transfer(s.group, f)))

    @task("noether", keys=("check",))
    def noether(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        invariants = noether_separating_set(s.group, s.ring)
        details = {"count": len(invariants)}
        if ctx.args.get("check") == "geometric":
            verdict = geometric_separating_test(s.group, s.ring, invariants, ctx.options.degree_cap)
            details.update(verdict.details)
            return TaskResult("noether", ctx.spec.label, verdict.result, str(len(invariants)),
                              witness=verdict.witness, details=details)
        return TaskResult("noether", ctx.spec.label, DONE, str(len(invariants)), details=details)


def setup(runner):
    runner.add_cog(InvariantTasks(runner))
