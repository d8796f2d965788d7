"""Minimal protocol endpoint used for testing external policies.

    python -m pommerlab.agents.echo --action 0
"""

import argparse
import json
import sys
import time


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description="Reply with a fixed action to every act request.")
    p.add_argument("--action", type=int, default=0)
    p.add_argument("--delay-ms", type=float, default=0.0, help="sleep before each action reply")
    p.add_argument("--crash-after", type=int, default=-1, help="exit after this many act requests")
    p.add_argument("--garbage", action="store_true", help="reply with non-JSON text")
    p.add_argument("--no-step", action="store_true", help="omit the step field from replies")
    args = p.parse_args(argv)

    acts = 0
    for line in sys.stdin:
        try:
            msg = json.loads(line)
        except json.JSONDecodeError:
            continue
        kind = msg.get("type")
        if kind == "init":
            out = {"type": "ready"}
        elif kind == "act":
            if acts == args.crash_after:
                return 1
            acts += 1
            if args.delay_ms:
                time.sleep(args.delay_ms / 1000.0)
            if args.garbage:
                sys.stdout.write("not json\n")
                sys.stdout.flush()
                continue
            out = {"type": "action", "action": args.action}
            if not args.no_step:
                out["step"] = msg.get("step")
        else:
            continue
        sys.stdout.write(json.dumps(out) + "\n")
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
