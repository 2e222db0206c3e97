"""Driving the batch front end from Python; the same runs are available as
``effect-factor <subcommand> --config FILE``."""

import json

from effect_factor.cli import emit_report, parse_config, run

cfg = parse_config('{"preset": "state-write", "objects": [0, 1, 2, 3]}')
report = run("factor", cfg)
print(emit_report(report, "human"))

# the machine report carries the config echo, which parses back to the same config
machine = json.loads(emit_report(report, "machine"))
print("echo round-trips:", parse_config(json.dumps(machine["config"])) == cfg)
