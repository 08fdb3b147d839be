from src.mechanics.group import (bireflection_analysis, check_bireflection_criterion, fixed_space,
                                 index_p_bireflection_criterion, orbits_of_points, space_basis_text)
from src.runner import DONE, FAIL, PASS, TaskCog, TaskContext, TaskResult, task


def _truth(kind: str, label: str, value: bool, **extra) -> TaskResult:
    return TaskResult(kind, label, PASS if value else FAIL, "true" if value else "false", **extra)


class GroupTasks(TaskCog):
    @task("orbits", keys=("e",))
    def orbits(self, ctx: TaskContext) -> TaskResult:
        e = ctx.args.integer("e", 1)
        partition = orbits_of_points(ctx.scenario.group, e)
        return TaskResult("orbits", ctx.spec.label, DONE, str(len(partition.orbits)), details={
            "points": partition.num_points,
            "burnside": partition.burnside_count,
            "sizes": partition.sizes,
        })

    @task("fixed-space", keys=("g",))
    def fixed(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        g = s.element(ctx.args.first("g"), ctx.spec.line)
        space = fixed_space(g)
        return TaskResult("fixed-space", ctx.spec.label, DONE, str(space.codim), details={
            "dim": space.dim,
            "basis": space_basis_text(s.field, space),
        })

    @task("bireflections")
    def bireflections(self, ctx: TaskContext) -> TaskResult:
        report = bireflection_analysis(ctx.scenario.group)
        value = "generated" if report.generated_by_bireflections else "not generated"
        details = {
            "reflections": len(report.reflections),
            "bireflections": len(report.bireflections),
            "subgroup_order": report.subgroup_order,
            "generated_by_reflections": report.generated_by_reflections,
            "is_p_group": report.is_p_group,
        }
        if report.notes:
            details["notes"] = report.notes
        return TaskResult("bireflections", ctx.spec.label, DONE, value, details=details)

    @task("criterion", keys=("N", "sigma"))
    def criterion(self, ctx: TaskContext) -> TaskResult:
        s, line = ctx.scenario, ctx.spec.line
        N = s.subgroup(ctx.args.require("N"), line)
        sigma = s.element(ctx.args.require("sigma"), line)
        return _truth("criterion", ctx.spec.label, check_bireflection_criterion(s.group, N, sigma))

    @task("index-p-criterion", keys=("N",))
    def index_p(self, ctx: TaskContext) -> TaskResult:
        s = ctx.scenario
        N = s.subgroup(ctx.args.first("N"), ctx.spec.line)
        return _truth("index-p-criterion", ctx.spec.label, index_p_bireflection_criterion(s.group, N))


def setup(runner):
    runner.add_cog(GroupTasks(runner))
