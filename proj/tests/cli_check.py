#!/usr/bin/env python3
"""End-to-end checks of orey_cli: exit codes, schema validity, manifest replay."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

CLI = sys.argv[1]
SCHEMAS = Path(sys.argv[2])

resources = []
for f in SCHEMAS.glob("*.schema.json"):
    doc = json.loads(f.read_text())
    resources.append((doc["$id"], Resource.from_contents(doc)))
    resources.append((f.name, Resource.from_contents(doc)))
registry = Registry().with_resources(resources)

failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(*args):
    p = subprocess.run([CLI, *args], capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def validate(doc, schema_name, what):
    schema = json.loads((SCHEMAS / schema_name).read_text())
    v = jsonschema.Draft202012Validator(schema, registry=registry)
    errors = sorted(v.iter_errors(doc), key=lambda e: list(e.path))
    for e in errors[:3]:
        print("     ", list(e.path), e.message[:200])
    check(not errors, f"{what} validates against {schema_name}")


def manifest_ok(out, what):
    m = Path(str(out) + ".manifest.json")
    check(m.exists(), f"{what} writes a manifest")
    if m.exists():
        validate(json.loads(m.read_text()), "manifest.schema.json", f"{what} manifest")
    return m


with tempfile.TemporaryDirectory() as d:
    d = Path(d)

    code, out, _ = run("sigma", "--gamma", "0.5")
    check(code == 0, "sigma exits 0")
    doc = json.loads(out)
    check(abs(doc["sigma_sq"] - 3.0) < 1e-9, "sigma --gamma 0.5 gives sigma_sq 3")
    validate(doc, "sigma.schema.json", "sigma")

    code, _, err = run("sigma", "--gamma", "0.99", "--tol", "1e-30")
    check(code == 2 and "unreachable tolerance" in err, "unreachable tolerance exits 2 with its own message")

    code, _, err = run("sigma", "--gamma", "1.5")
    check(code == 1 and "domain" in err, "gamma outside (0,1) is a usage error")

    lin = d / "lin.csv"
    lin.write_text("k,t,x\n" + "".join(f"{k},{k / 16!r},{0.3 * k!r}\n" for k in range(17)))
    code, _, err = run("estimate", "--in", str(lin))
    check(code == 2 and "degenerate input" in err, "affine path exits 2 as degenerate input")

    bad = d / "bad.csv"
    bad.write_text("k,t,x\n0,0,0\n1,0.5\n")
    code, _, err = run("estimate", "--in", str(bad))
    check(code == 1 and "format error" in err, "malformed CSV exits 1 with a format message")

    code, _, err = run("simulate", "--model", "gauss:H=0.5", "--n", "16", "--seed", "1", "--out", str(d / "x.csv"))
    check(code == 1 and "unknown model" in err, "unknown model spec exits 1")

    code, _, err = run("simulate", "--model", "fbm:gamma=0.3", "--n", "16", "--out", str(d / "x.csv"))
    check(code == 1 and "--seed" in err, "missing seed exits 1")

    code, _, _ = run("frobnicate")
    check(code == 1, "unknown subcommand exits 1")

    path = d / "p.csv"
    code, _, _ = run("simulate", "--model", "sfbm:H=0.7", "--n", "2048", "--seed", "11", "--out", str(path))
    check(code == 0 and path.exists(), "simulate writes a path")
    sim_manifest = manifest_ok(path, "simulate")

    est = d / "e.json"
    code, _, _ = run("estimate", "--in", str(path), "--ci", "0.95", "--out", str(est))
    check(code == 0, "estimate exits 0")
    edoc = json.loads(est.read_text())
    validate(edoc, "estimate.schema.json", "estimate")
    check(abs(edoc["gamma_hat"] - 0.7) < 0.1, f"estimate near 0.7 (got {edoc['gamma_hat']:.4f})")
    manifest_ok(est, "estimate")

    co = d / "c.json"
    code, _, _ = run("coeffs", "--model", "bifbm:H=0.6,K=0.5", "--n", "16", "--full", "--out", str(co))
    check(code == 0, "coeffs exits 0")
    validate(json.loads(co.read_text()), "coeffs.schema.json", "coeffs")

    code, out, _ = run("verify", "--model", "sfbm:H=0.7", "--checks", "bias")
    check(code == 0, "verify bias exits 0")
    vdoc = json.loads(out)
    check(vdoc["overall"] == "PASS" and vdoc["checks"]["bias"]["verdict"] == "PASS",
          "verify --model sfbm:H=0.7 --checks bias is PASS")
    validate(vdoc, "verify.schema.json", "verify bias")

    for model in ("sfbm:H=0.3", "bifbm:H=0.6,K=0.5"):
        vo = d / "v.json"
        code, _, _ = run("verify", "--model", model, "--nmax", "256", "--out", str(vo))
        check(code in (0, 2), f"verify all checks runs for {model}")
        validate(json.loads(vo.read_text()), "verify.schema.json", f"verify {model}")

    code, _, err = run("verify", "--model", "fbm:gamma=0.3", "--checks", "bias,nope")
    check(code == 1, "unknown check name exits 1")

    mc = d / "m.json"
    samples = d / "s.csv"
    code, _, _ = run("mc", "--model", "fbm:gamma=0.3", "--n", "128", "--reps", "120", "--seed", "5",
                     "--out", str(mc), "--samples", str(samples))
    check(code in (0, 2), "mc bivariate runs")
    validate(json.loads(mc.read_text()), "mc.schema.json", "mc bivariate")
    mc_manifest = manifest_ok(mc, "mc")
    check(samples.exists() and len(samples.read_text().splitlines()) == 121, "mc writes one sample row per rep")

    mg = d / "g.json"
    code, _, _ = run("mc", "--model", "sfbm:H=0.7", "--n", "128", "--reps", "120", "--seed", "5",
                     "--stat", "gamma_hat", "--out", str(mg))
    check(code in (0, 2), "mc gamma_hat runs")
    validate(json.loads(mg.read_text()), "mc.schema.json", "mc gamma_hat")

    for what, m in (("simulate", sim_manifest), ("mc", mc_manifest)):
        code, out, _ = run("replay", "--manifest", str(m))
        rep = json.loads(out)
        check(code == 0 and rep["reproduced"], f"replay of {what} reproduces digests")

    tampered = json.loads(sim_manifest.read_text())
    tampered["outputs"][0]["sha256"] = "0" * 64
    tm = d / "tampered.json"
    tm.write_text(json.dumps(tampered))
    code, out, _ = run("replay", "--manifest", str(tm))
    check(code == 2 and not json.loads(out)["reproduced"], "replay detects a digest mismatch")

    code, out, _ = run("--version")
    check(code == 0 and out.strip() != "", "--version prints a version")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
