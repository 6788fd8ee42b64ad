import json
import logging
import os
import subprocess
import click
import pandas as pd
from tqdm import tqdm

SCENARIO_EXTENSIONS = (".json", ".yml", ".yaml")
EXIT_CODES = {0: "ok", 1: "maxwell-failed", 2: "einstein-failed", 3: "structural"}

# log into a file
logging.basicConfig(level=logging.INFO, filename="batch.log")
logger = logging.getLogger(__name__)


def summarize(name, returncode, report_path):
    """One row per checked background of a report (or a single row when nothing was verified)."""
    row = {"scenario": name, "exit_code": returncode, "status": EXIT_CODES.get(returncode, "unknown")}
    if not os.path.isfile(report_path):
        return [row]
    with open(report_path, "r", encoding="utf-8") as file:
        report = json.load(file)
    row["mode"] = report["mode"]
    row["flags"] = ";".join(report["flags"])
    backgrounds = report["results"].get("verify", [])
    if not backgrounds:
        return [row]
    rows = []
    for background in backgrounds:
        rows.append(
            {
                **row,
                "background": background["name"],
                "f": background["f"],
                "phi_norm2": background["phi_norm2"],
                "lambda": background["lambda"],
                "maxwell_residual": background["residuals"]["maxwell"],
                "einstein7_residual": background["residuals"]["einstein7"],
                "type": background["type"]["tag"] if background["type"] else None,
            }
        )
    return rows


@click.command()
@click.option(
    "--directory",
    "-d",
    help="The directory holding the scenario files (.json, .yml or .yaml).",
    type=click.Path(exists=True, file_okay=False, dir_okay=True, readable=True),
    required=True,
)
@click.option(
    "--error-directory",
    "-e",
    help="The directory where the standard and error outputs for "
    "scenarios that could not be processed will be stored.",
    type=click.Path(exists=False, file_okay=False, dir_okay=True, writable=True),
)
@click.option(
    "--output-directory",
    "-o",
    help="The directory where the JSON reports and the summary will be stored.",
    default="reports",
    type=click.Path(exists=False, file_okay=False, dir_okay=True, writable=True),
)
@click.option(
    "--command",
    "-c",
    help="The sugra47 subcommand to run on each scenario.",
    default="verify",
    type=click.Choice(["verify", "solve-maxwell", "ricci"]),
)
@click.argument("options", nargs=-1, type=click.UNPROCESSED)
def batch(directory, error_directory, output_directory, command, options):
    """Run a sugra47 subcommand on every scenario of a directory.
    Each scenario is processed in its own process and its JSON report is stored
    in the output directory. Arguments given after '--' are passed to each
    command. '--out' and '--report' cannot be passed after '--' as they are used
    by default. A summary of every report is written to 'summary.csv'.

    Example of usage:
    batch.py -d scenarios -e errors -o reports -- --mode float --tolerance 1e-8
    """
    for folder in (error_directory, output_directory):
        if folder is not None:
            os.makedirs(folder, exist_ok=True)
    scenarios = sorted(
        f for f in os.listdir(directory) if os.path.splitext(f)[1] in SCENARIO_EXTENSIONS
    )
    rows = []
    errors_count = 0
    for scenario in tqdm(scenarios, desc="Processing scenarios"):
        name = os.path.splitext(scenario)[0]
        report_path = os.path.join(output_directory, name + ".json")
        args = (command, "--out", report_path, "--report", "json", *options, os.path.join(directory, scenario))
        sproc = subprocess.Popen(
            ["sugra47", *args],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
        out, err = sproc.communicate()
        if sproc.returncode == 3:
            logger.error("(Error %d) Could not process scenario '%s'", errors_count, scenario)
            errors_count += 1
            if error_directory is not None:
                base = os.path.join(error_directory, name)
                with open(base + ".out.txt", "w", encoding="utf-8") as file:
                    file.write(out.decode("utf-8"))
                with open(base + ".err.txt", "w", encoding="utf-8") as file:
                    file.write(err.decode("utf-8"))
        elif sproc.returncode != 0:
            logger.info("Scenario '%s' exited with %d", scenario, sproc.returncode)
        rows.extend(summarize(name, sproc.returncode, report_path))
    print(f"There was {errors_count} errors (malformed scenarios)")
    outfile = os.path.join(output_directory, "summary.csv")
    pd.DataFrame(rows).to_csv(outfile, index=False)
    logger.info("Summary of %d scenarios written to '%s'", len(scenarios), outfile)


if __name__ == "__main__":
    batch()
