"""Matrix files and the command-line pipeline.

Run: python demos/05_files_and_cli.py [out_dir]
"""
import json
import os
import subprocess
import sys

from bandclust import DataMatrix, load_matrix, save_matrix

out_dir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "output")
os.makedirs(out_dir, exist_ok=True)

# CSV keeps labels; Matrix Market stores values only, sparse or dense
A = DataMatrix([[1, 0, 2], [0, 3, 0]], row_labels=["r1", "r2"], col_labels=["a", "b", "c"])
csv_path = os.path.join(out_dir, "small.csv")
mtx_path = os.path.join(out_dir, "small.mtx")
save_matrix(A, csv_path)
save_matrix(A, mtx_path)
print(open(csv_path).read())
print(open(mtx_path).read())
print("labels survive the CSV round trip:", load_matrix(csv_path) == A)


def cli(*args):
    cmd = [sys.executable, "-m", "bandclust", *args]
    print("$ bandclust", " ".join(args))
    return subprocess.run(cmd, check=True, capture_output=True, text=True).stdout


def path(name):
    return os.path.join(out_dir, name)


cli("generate", "--rows", "24", "--cols", "20", "--blocks", "3", "--seed", "7",
    "--out", path("syn.csv"), "--truth", path("truth.json"))
cli("scramble", "-i", path("syn.csv"), "--seed", "8", "-o", path("scr.csv"), "--arrangement", path("scr.json"))
cli("solve", "-i", path("scr.csv"), "--seed", "3", "-o", path("result.json"), "--reordered", path("re.csv"))
report = json.loads(cli("eval", "-i", path("scr.csv"), "--result", path("result.json"),
                        "--truth", path("truth.json"), "--scramble", path("scr.json")))
print(f"blocks found {report['blocks_found']}, recovery {report['recovery_score']:.3f}")
cli("plot", "-i", path("re.csv"), "-o", path("re.svg"), "--title", "reordered")
print(cli("rcm", "-i", path("scr.csv")).count("\n"), "lines of RCM result JSON")
