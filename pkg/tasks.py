"""Command-line tools to facilitate the development of swamp."""
from invoke import task


@task
def check(c):
    """Run the formatter check, the linter and the fast test suite."""
    c.run("black --check swamp tests")
    c.run("pylint swamp")
    c.run("pytest tests")


@task
def slow(c):
    """Run the end-to-end scenario runs, which take minutes each."""
    c.run("pytest -m slow tests/test_reproduction.py")


@task(help={"out": "Directory for the per-run CSV and stats files."})
def bench(c, out="out"):
    """Regenerate the results table from the bundled scenarios."""
    c.run(
        "plan sweep swamp/scenarios/phi1.json swamp/scenarios/phi2.json "
        "swamp/scenarios/acc.json --semirings minmax maxplus --seeds 0 --out %s" % out
    )
