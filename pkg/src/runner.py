import importlib
import logging
import os
import signal
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from src.config import (DEGREE_CAP, EXIT_ERROR, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, FROBENIUS_MMAX)
from src.errors import ScenarioParseError, ScenarioTimeout, SepAlgError
from src.scenario import Scenario, TaskArgs, TaskSpec

log = logging.getLogger(__name__)

PASS, FAIL, INCONCLUSIVE, ERROR, DONE = "pass", "fail", "inconclusive", "error", "done"


@dataclass
class RunOptions:
    task_filter: Optional[str] = None
    output_format: str = "text"
    degree_cap: int = DEGREE_CAP
    mmax: int = FROBENIUS_MMAX
    heuristic: bool = False
    timeout: Optional[int] = None


@dataclass
class TaskResult:
    kind: str
    label: str
    status: str
    value: Optional[str] = None
    witness: Optional[str] = None
    details: Dict[str, object] = field(default_factory=dict)
    error: Optional[str] = None
    seconds: float = 0.0
    # optional custom comparison for expect=
    matcher: Optional[Callable[[str], bool]] = field(default=None, repr=False, compare=False)

    @property
    def name(self) -> str:
        return f"{self.kind} {self.label}".strip()

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {"task": self.name, "status": self.status}
        if self.value is not None:
            out["value"] = self.value
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class TaskContext:
    scenario: Scenario
    args: TaskArgs
    options: RunOptions
    spec: TaskSpec


def task(kind: str, keys: Sequence[str] = ()):
    """Marks a cog method as the handler for one task kind."""
    def decorator(fn):
        fn.__task_kind__ = kind
        fn.__task_keys__ = tuple(keys)
        return fn
    return decorator


class TaskCog:
    """Base class of task groups; every method marked with @task is registered."""

    def __init__(self, runner: "ScenarioRunner"):
        self.runner = runner

    def handlers(self):
        for attr in dir(type(self)):
            fn = getattr(self, attr)
            kind = getattr(fn, "__task_kind__", None)
            if kind:
                yield kind, fn, fn.__task_keys__


@contextmanager
def _deadline(seconds: Optional[int]):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def _expired(signum, frame):
        raise ScenarioTimeout(f"task exceeded {seconds}s")

    previous = signal.signal(signal.SIGALRM, _expired)
    signal.alarm(seconds)
    try:
        yield
    finally:
        signal.alarm(0)
        signal.signal(signal.SIGALRM, previous)


def _matches(result: TaskResult, expect: str) -> bool:
    """Status, then value text, then the handler's own matcher, which may raise
    ScenarioParseError on an expect it cannot read."""
    want = expect.strip()
    if want.lower() == result.status:
        return True
    if result.value is not None and want.lower() == str(result.value).strip().lower():
        return True
    return result.matcher is not None and result.matcher(want)


# ========= RUNNER =========
class ScenarioRunner:
    def __init__(self, options: Optional[RunOptions] = None):
        self.options = options or RunOptions()
        self.handlers: Dict[str, Callable[[TaskContext], TaskResult]] = {}
        self.keys: Dict[str, Sequence[str]] = {}
        self.cogs: List[TaskCog] = []

    def add_cog(self, cog: TaskCog):
        for kind, fn, keys in cog.handlers():
            if kind in self.handlers:
                raise ValueError(f"task kind '{kind}' registered twice")
            self.handlers[kind] = fn
            self.keys[kind] = keys
        self.cogs.append(cog)

    def load_cogs(self):
        """Load all cogs from src/cogs/ directory."""
        cogs_dir = os.path.join(os.path.dirname(__file__), "cogs")
        for filename in sorted(os.listdir(cogs_dir)):
            if filename.endswith(".py") and not filename.startswith("__"):
                cog_name = filename[:-3]
                try:
                    module = importlib.import_module(f"src.cogs.{cog_name}")
                    module.setup(self)
                    log.debug("✅ Loaded cog: %s", cog_name)
                except Exception as e:
                    log.error("❌ Failed to load cog %s: %s", cog_name, e)
                    raise
        return self

    def _selected(self, spec: TaskSpec) -> bool:
        f = self.options.task_filter
        return not f or f in (spec.kind, spec.label, spec.name)

    def run_task(self, scenario: Scenario, spec: TaskSpec) -> TaskResult:
        started = time.monotonic()
        handler = self.handlers.get(spec.kind)
        if handler is None:
            result = TaskResult(spec.kind, spec.label, ERROR, error=f"unknown task kind '{spec.kind}' (line {spec.line})")
            return result
        try:
            args = TaskArgs.parse(spec.text, self.keys[spec.kind], spec.line)
            with _deadline(self.options.timeout):
                result = handler(TaskContext(scenario, args, self.options, spec))
            if args.expect is not None and result.status != ERROR:
                observed = result.value if result.value is not None else result.status
                if _matches(result, args.expect):
                    result.status = PASS
                else:
                    result.details["expected"] = args.expect
                    result.details["observed"] = observed
                    result.status = FAIL
        except ScenarioTimeout as e:
            log.warning("⚠️ %s: %s", spec.name, e)
            result = TaskResult(spec.kind, spec.label, INCONCLUSIVE, error=str(e))
        except ScenarioParseError as e:
            result = TaskResult(spec.kind, spec.label, ERROR, error=f"line {spec.line}: {e}" if spec.line and not e.line else str(e))
        except SepAlgError as e:
            result = TaskResult(spec.kind, spec.label, ERROR, error=f"{type(e).__name__}: {e}")
        except Exception as e:
            log.error("⚠️ Unhandled exception in %s: %s: %s", spec.name, type(e).__name__, e)
            result = TaskResult(spec.kind, spec.label, ERROR, error=f"{type(e).__name__}: {e}")
        result.seconds = round(time.monotonic() - started, 3)
        marker = {PASS: "✅", DONE: "✅", FAIL: "❌"}.get(result.status, "⚠️")
        log.info("%s %s -> %s", marker, spec.name, result.status)
        return result

    def run(self, scenario: Scenario) -> List[TaskResult]:
        return [self.run_task(scenario, spec) for spec in scenario.tasks if self._selected(spec)]


def exit_code(results: Sequence[TaskResult]) -> int:
    statuses = {r.status for r in results}
    if ERROR in statuses:
        return EXIT_ERROR
    if FAIL in statuses:
        return EXIT_FAIL
    if INCONCLUSIVE in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_OK
