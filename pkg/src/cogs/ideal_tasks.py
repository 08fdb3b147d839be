from src.mechanics.cmcert import hsop_check_polyring, present, regular_sequence_check
from src.mechanics.groebner import Ideal, buchberger, krull_dimension
from src.mechanics.mpoly import GREVLEX, LEX
from src.runner import DONE, FAIL, PASS, TaskCog, TaskContext, TaskResult, task
from src.scenario import split_list


class IdealTasks(TaskCog):
    @task("gb", keys=("order",))
    def gb(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        order = {"lex": LEX, "grevlex": GREVLEX}[ctx.args.get("order", "grevlex")]
        gb = buchberger(Ideal(s.ring, s.polys(ctx.args.first(), ctx.spec.line)), order, ctx.options.degree_cap)
        details = {"basis": [str(g) for g in gb.basis]}
        if not gb.is_unit():
            details["dimension"] = krull_dimension(gb)
        return TaskResult("gb", ctx.spec.label, DONE, str(len(gb)), details=details)

    @task("present", keys=("save",))
    def presentation(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        gens = s.polys(ctx.args.first(), ctx.spec.line)
        A = present(s.ring, gens, s.group, ctx.options.degree_cap)
        s.algebras[ctx.args.get("save") or ctx.spec.label or "A"] = A
        return TaskResult("present", ctx.spec.label, DONE, str(len(A.relations.gens)), details={
            "degrees": A.degrees,
            "relations": [str(r) for r in A.relations.gens],
        })

    @task("hsop")
    def hsop(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        elements = s.polys(ctx.args.first(), ctx.spec.line)
        ok = hsop_check_polyring(elements, s.ring, ctx.options.degree_cap)
        return TaskResult("hsop", ctx.spec.label, PASS if ok else FAIL, "true" if ok else "false")

    @task("regular", keys=("A", "seq"))
    def regular(self, ctx: TaskContext) -> TaskResult:
        s, line = ctx.scenario, ctx.spec.line
        A = s.algebra(ctx.args.require("A"), line)
        seq = [A.tag(t) for t in split_list(ctx.args.require("seq"))]
        result = regular_sequence_check(A, seq, ctx.options.degree_cap)
        if result.regular:
            return TaskResult("regular", ctx.spec.label, PASS, "regular")
        return TaskResult("regular", ctx.spec.label, FAIL, str(result.failing_index),
                          details={"failing_element": str(seq[result.failing_index - 1])})


def setup(runner):
    runner.add_cog(IdealTasks(runner))
