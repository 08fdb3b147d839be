#!/usr/bin/env python3
"""
ACCEPTANCE AUDIT REPORT
Runs every shipped fixture, then re-verifies the defect certificates and the
cross-checks that tie the modules together.
"""
import os
import sys
import traceback

print("\n" + "=" * 80)
print("SEPARATING-ALGEBRA TOOLKIT AUDIT REPORT")
print("=" * 80 + "\n")

failures = []

# ===== 1. COG LOADING =====
print("[1] TASK HANDLERS")
print("-" * 80)

try:
    from src.runner import RunOptions, ScenarioRunner, exit_code

    runner = ScenarioRunner(RunOptions()).load_cogs()
    print(f"✅ Loaded {len(runner.cogs)} cogs with {len(runner.handlers)} task kinds")
    for kind in sorted(runner.handlers):
        print(f"      - {kind}")
except Exception as e:
    print(f"   ❌ FAILED: {e}")
    traceback.print_exc()
    sys.exit(1)

# ===== 2. FIXTURES =====
print("\n[2] SHIPPED FIXTURES")
print("-" * 80)

scenarios = {}
try:
    from src.config import FIXTURE_DIR
    from src.scenario import load_scenario
    from src.utils import summary

    names = sorted(f for f in os.listdir(FIXTURE_DIR) if f.endswith(".scn"))
    print(f"   {len(names)} fixtures in {FIXTURE_DIR}")
    for filename in names:
        scenario = load_scenario(os.path.join(FIXTURE_DIR, filename))
        results = runner.run(scenario)
        code = exit_code(results)
        scenarios[scenario.name] = scenario
        counts = summary(results)
        status = "✅" if code == 0 else "❌"
        print(f"   {status} {scenario.name:22} exit {code} | " + ", ".join(f"{k}={v}" for k, v in counts.items() if v))
        for r in results:
            if r.status not in ("pass", "done"):
                print(f"         ⚠️ {r.name}: {r.status} {r.value or ''} {r.error or ''}".rstrip())
        if code != 0:
            failures.append(scenario.name)
except Exception as e:
    print(f"   ❌ FAILED: {e}")
    traceback.print_exc()
    failures.append("fixtures")

# ===== 3. CERTIFICATE RE-VERIFICATION =====
print("\n[3] CERTIFICATE RE-VERIFICATION")
print("-" * 80)

try:
    from src.mechanics.cmcert import DefectCertificate, defect_certificate

    for name in ("c4perm", "additive3copies", "additive3copies_f3"):
        scenario = scenarios.get(name)
        if scenario is None:
            print(f"   ⚠️ {name}: not loaded")
            continue
        g = scenario.cocycles["g0"]
        ann = [scenario.poly(a) for a in (("c1", "c2", "c3") if name == "c4perm" else ("x1", "x2", "x3"))]
        cert = defect_certificate(scenario.group, g, ann)
        again = DefectCertificate.from_dict(cert.to_dict())
        ok = again.verify(g)
        print(f"   {'✅' if ok else '❌'} {name:22} bound {cert.bound} | {cert.conclusion}")
        for entry in cert.annihilators:
            print(f"         {entry['element']} · g = (s - 1)({entry['witness']})")
except Exception as e:
    print(f"   ❌ FAILED: {e}")
    traceback.print_exc()
    failures.append("certificates")

# ===== 4. CROSS-CHECKS =====
print("\n[4] CROSS-CHECKS")
print("-" * 80)

try:
    from src.mechanics.cmcert import free_module_check, regular_sequence_check

    klein = scenarios.get("klein5")
    if klein is not None and "A" in klein.algebras:
        A = klein.algebras["A"]
        hsop = A.tags[:5]
        free = free_module_check(A, hsop, [A.tag("1"), A.tag("T6"), A.tag("T7"), A.tag("T6*T7")]).free
        regular = regular_sequence_check(A, hsop).regular
        print(f"   free module => hsop regular: {'✅ YES' if (not free or regular) else '❌ NO'}")
        if free and not regular:
            failures.append("cm-regular")
    else:
        print("   ⚠️ klein5 presentation not available")
except Exception as e:
    print(f"   ❌ FAILED: {e}")
    traceback.print_exc()
    failures.append("cross-checks")

# ===== SUMMARY =====
print("\n" + "=" * 80)
print("AUDIT SUMMARY")
print("=" * 80)

if failures:
    print("\n❌ Problems found in: " + ", ".join(failures) + "\n")
    sys.exit(1)
print("\n✅ Every fixture matched its expectations and every certificate re-verified\n")
print("=" * 80 + "\n")
