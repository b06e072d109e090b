#!/usr/bin/env python3
"""Print the scored-term table and generated summary for every method of the
bundled demo project.

    python3 scripts/run_walkthrough.py [--method IconSource.getIcon]
"""

import argparse

from codesum import jparse
from codesum.cli import demo_project_dir
from codesum.summarizer import ProjectIndex, summarize_method
from codesum.textpipe import Lexicon
from codesum.weights import WeightsDB


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--method", help="only this fully-qualified method")
    args = parser.parse_args()

    lex = Lexicon.load()
    project = jparse.parse_project(demo_project_dir())
    index = ProjectIndex.build(project, lex)
    db = WeightsDB.defaults()

    methods = sorted(project.methods, key=lambda m: m.fqname)
    if args.method:
        methods = [project.find(args.method)]
    for m in methods:
        if index.bags[m.fqname].total() == 0:
            continue
        selected, text = summarize_method(m, index, db)
        print(f"\n{m.fqname}  loc={m.loc} complexity={m.metrics.complexity} "
              f"stereotype={m.metrics.stereotype.value}")
        print(f"categories: {', '.join(sorted(c.value for c in m.categories))}")
        print(f"{'term':<14}{'area':<20}{'tf':>3}{'df':>4}{'importance':>12}  snippet")
        for s in selected:
            snippet = " ".join(s.source_snippet.split())
            print(f"{s.term:<14}{s.area.name:<20}{s.tf:>3}{s.df:>4}{s.importance:>12.4f}  {snippet}")
        print(f"summary: {text.text}")


if __name__ == "__main__":
    main()
