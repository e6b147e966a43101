#!/usr/bin/env python3
"""Validates the shipped fixtures against the manifest schema, and checks that
the schema rejects a few malformed manifests."""
import copy
import json
import pathlib
import sys

import jsonschema


def main():
    schema = json.load(open(sys.argv[1]))
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    fixtures = sorted(pathlib.Path(sys.argv[2]).glob("*.json"))
    assert fixtures, "no fixtures found"
    for path in fixtures:
        validator.validate(json.load(open(path)))
        print("ok", path.name)

    base = json.load(open(fixtures[0]))
    bad = []
    m = copy.deepcopy(base); m["extra"] = 1; bad.append(("unknown top-level key", m))
    m = copy.deepcopy(base); m["clips"] = []; bad.append(("empty clips", m))
    m = copy.deepcopy(base); m["clips"][0]["duration_s"] = 0; bad.append(("zero duration", m))
    m = copy.deepcopy(base); m["clips"][0]["keywords"] = []; bad.append(("no keywords", m))
    m = copy.deepcopy(base); m["clips"][0]["rating"] = 3; bad.append(("unknown clip key", m))
    m = copy.deepcopy(base); del m["clips"][0]["media_uri"]; bad.append(("missing media_uri", m))
    m = copy.deepcopy(base); m["topics"].append("rent/buy"); bad.append(("bad topic token", m))
    failures = 0
    for name, manifest in bad:
        if validator.is_valid(manifest):
            print("schema accepted", name)
            failures += 1
        else:
            print("rejected", name)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
