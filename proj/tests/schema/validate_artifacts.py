"""Runs the CLI end to end and validates every artifact against the JSON schemas."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from jsonschema import Draft202012Validator
from referencing import Registry, Resource


def load_registry(schema_dir: Path) -> Registry:
    registry = Registry()
    for path in schema_dir.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))
    return registry


def main() -> int:
    cli, schema_dir = Path(sys.argv[1]), Path(sys.argv[2])
    registry = load_registry(schema_dir)
    validators = {
        name: Draft202012Validator(json.loads((schema_dir / f"{name}.schema.json").read_text()), registry=registry)
        for name in ("instance", "family", "cover", "pipeline-report")
    }
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        d = Path(tmp)

        def run(*args: str, expect: int = 0) -> dict:
            proc = subprocess.run([str(cli), *args], capture_output=True, text=True, check=False)
            if proc.returncode != expect:
                raise SystemExit(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr}")
            return json.loads(proc.stdout)

        run("gen-maxlin", "--n", "10", "--m", "20", "--q", "2", "--c", "9/10", "--seed", "3", "-o", str(d / "ml.json"))
        run("gen-maxlin", "--n", "3", "--m", "6", "--q", "3", "--c", "2/3", "--seed", "4", "-o", str(d / "small.json"))
        run("reduce", "maxlin-to-mld", "--in", str(d / "small.json"), "-o", str(d / "mld.json"))
        run("reduce", "group-naive", "--in", str(d / "mld.json"), "--k", "2", "-o", str(d / "kn.json"))
        run("reduce", "kmld-to-ncp", "--in", str(d / "kn.json"), "-o", str(d / "ncp.json"))
        run("build-family", "random", "--m", "20", "--k", "3", "--alpha", "1/10", "--epsilon", "1/2", "--seed", "3",
            "-o", str(d / "fr.json"))
        run("build-family", "deterministic", "--m", "16", "--k", "2", "--eta", "1/4", "--epsilon", "1/2",
            "-o", str(d / "fd.json"))
        run("build-cover", "--family", str(d / "fd.json"), "--alpha", "1/4", "--epsilon", "1/2", "-o", str(d / "c.json"))
        reports = [
            run("reduce", "pipeline", "--in", str(d / "ml.json"), "--k", "3", "--epsilon", "1/2", "--family", "random",
                "--seed", "3", "-o", str(d / "kc.json")),
            run("reduce", "pipeline", "--in", str(d / "ml.json"), "--k", "3", "--epsilon", "1/4", "--family", "random",
                "--seed", "3", "--timings"),
            run("reduce", "pipeline", "--in", str(d / "ml.json"), "--k", "2", "--epsilon", "1/2", "--family",
                "deterministic"),
        ]
        checks = [("instance", d / n) for n in ("ml.json", "small.json", "mld.json", "kn.json", "ncp.json", "kc.json")]
        checks += [("family", d / "fr.json"), ("family", d / "fd.json"), ("cover", d / "c.json")]
        docs = [(name, path.name, json.loads(path.read_text())) for name, path in checks]
        docs += [("pipeline-report", f"report {i}", r) for i, r in enumerate(reports)]
        for schema, label, doc in docs:
            errors = sorted(validators[schema].iter_errors(doc), key=lambda e: list(e.path))
            for err in errors:
                failures += 1
                print(f"FAIL {label} against {schema}: {list(err.path)}: {err.message}")
            if not errors:
                print(f"ok   {label} against {schema}")
        bad = json.loads((d / "c.json").read_text())
        bad["unexpected"] = 1
        if validators["cover"].is_valid(bad):
            failures += 1
            print("FAIL schema accepts unknown cover field")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
