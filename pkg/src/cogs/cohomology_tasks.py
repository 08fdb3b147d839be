from src.config import SEARCH_DEGREE
from src.mechanics.cohomology import (CERTIFIED, REFUTED, annihilates, bar_hn_trivial, cocycle_space, frobenius_chain,
                                     frobenius_power_cocycle, is_coboundary, nontrivial_all_frobenius, restrict,
                                     search_restricted_classes)
from src.runner import DONE, FAIL, INCONCLUSIVE, PASS, TaskCog, TaskContext, TaskResult, task
from src.scenario import parse_module


class CohomologyTasks(TaskCog):
    @task("cohomology", keys=("save",))
    def cohomology(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        module = parse_module(s, ctx.args.first(), ctx.spec.line)
        space = cocycle_space(s.group, module)
        save = ctx.args.get("save")
        if save and space.representatives:
            s.cocycles[save] = space.representatives[0]
        return TaskResult("cohomology", ctx.spec.label, DONE, str(space.dim_h), details={
            "module": space.module,
            "dim_z": space.dim_z,
            "dim_b": space.dim_b,
            "representatives": [r.table() for r in space.representatives],
        })

    @task("coboundary", keys=("g",))
    def coboundary(self, ctx: TaskContext) -> TaskResult:
        g = ctx.scenario.cocycle(ctx.args.first("g"), ctx.spec.line)
        result = is_coboundary(g)
        return TaskResult("coboundary", ctx.spec.label, PASS if result.is_coboundary else FAIL,
                          "true" if result.is_coboundary else "false", witness=result.witness_text)

    @task("frobenius", keys=("g", "m", "save", "chain"))
    def frobenius(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        g = s.cocycle(ctx.args.first("g"), ctx.spec.line)
        m = ctx.args.integer("m", 1)
        gm = frobenius_power_cocycle(g, m)
        save = ctx.args.get("save")
        if save:
            s.cocycles[save] = gm
        trivial = is_coboundary(gm).is_coboundary
        details = {"module": gm.module.label, "values": gm.table()}
        chain = ctx.args.integer("chain")
        if chain is not None:
            details["chain"] = [{"m": k, "module": label, "coboundary": cob}
                                for k, label, cob in frobenius_chain(g, chain)]
        return TaskResult("frobenius", ctx.spec.label, DONE, "coboundary" if trivial else "nonzero", details=details)

    @task("annihilates", keys=("a", "g"))
    def annihilator(self, ctx: TaskContext) -> TaskResult:
        s, line = ctx.scenario, ctx.spec.line
        a = s.poly(ctx.args.first("a"), line)
        g = s.cocycle(ctx.args.require("g"), line)
        result = annihilates(a, g)
        return TaskResult("annihilates", ctx.spec.label, PASS if result.annihilates else FAIL,
                          "true" if result.annihilates else "false", witness=result.witness)

    @task("restrict", keys=("g", "H"))
    def restriction(self, ctx: TaskContext) -> TaskResult:
        s, line = ctx.scenario, ctx.spec.line
        g = s.cocycle(ctx.args.first("g"), line)
        H = s.subgroup(ctx.args.require("H"), line)
        restricted = restrict(g, H)
        result = is_coboundary(restricted)
        return TaskResult("restrict", ctx.spec.label, PASS if result.is_coboundary else FAIL,
                          "true" if result.is_coboundary else "false", witness=result.witness_text,
                          details={"values": restricted.table()})

    @task("nontrivial", keys=("g", "mmax"))
    def nontrivial(self, ctx: TaskContext) -> TaskResult:
        g = ctx.scenario.cocycle(ctx.args.first("g"), ctx.spec.line)
        verdict = nontrivial_all_frobenius(g, ctx.args.integer("mmax", ctx.options.mmax))
        status = {CERTIFIED: PASS, REFUTED: FAIL}.get(verdict.kind, INCONCLUSIVE)
        details = {"reason": verdict.reason}
        if verdict.kind not in (CERTIFIED, REFUTED):
            details["note"] = "explicit checks only; not a proof for all m"
        return TaskResult("nontrivial", ctx.spec.label, status, str(verdict), witness=verdict.witness, details=details)

    @task("search-restricted", keys=("degree", "save"))
    def search(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        result = search_restricted_classes(s.group, s.ring, ctx.args.integer("degree", SEARCH_DEGREE))
        details = {"dims": {str(d): n for d, n in result.dims.items()}}
        if result.degree is None:
            return TaskResult("search-restricted", ctx.spec.label, FAIL, "none", details=details)
        save = ctx.args.get("save")
        if save:
            s.cocycles[save] = result.classes[0]
        details["classes"] = [str(c) for c in result.classes]
        return TaskResult("search-restricted", ctx.spec.label, PASS, str(result.degree), details=details)

    @task("bar", keys=("n",))
    def bar(self, ctx: TaskContext) -> TaskResult:
        n = ctx.args.integer("n")
        if n is None:
            n = int(ctx.args.first())
        return TaskResult("bar", ctx.spec.label, DONE, str(bar_hn_trivial(ctx.scenario.group, n)))


def setup(runner):
    runner.add_cog(CohomologyTasks(runner))
