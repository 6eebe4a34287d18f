# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Documents and the command line
#
# Objects serialize to canonical JSON; parsing and serializing again gives
# the same bytes.  The same operations are available as `dgkernels`
# subcommands.

# %%
import json
import tempfile
from pathlib import Path

from dgkernels import corpus, io
from dgkernels.cli import run
from dgkernels.linalg import Field

F2 = Field(2)
text = io.serialize(corpus.a2(F2))
print(io.serialize(io.parse(text).obj) == text)

# %%
tmp = Path(tempfile.mkdtemp())
docs = corpus.bundled_documents(F2)
for name in ("A2.dg", "S_y(A2).dg", "h^y(A2).dg", "diag(A2).dg"):
    io.dump(docs[name], tmp / name)

code, out = run(["validate", str(tmp / "A2.dg")])
print(code, out)

# %%
code, out = run(["compose-kernels", str(tmp / "diag(A2).dg"), str(tmp / "diag(A2).dg"),
                 "--out", str(tmp / "dd.dg")])
print(code, run(["validate", str(tmp / "dd.dg")])[0])

# %% [markdown]
# Exit codes: 0 pass, 1 fail, 2 unknown, 3 usage or parse error.

# %%
code, out = run(["heq-modules", str(tmp / "S_y(A2).dg"), str(tmp / "h^y(A2).dg"), "--json"])
print(code, json.loads(out)["status"])
