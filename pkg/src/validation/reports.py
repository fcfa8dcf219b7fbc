"""
Report generation module for the TF phase-space toolkit.

This module handles turning verification results into the stdout table and,
optionally, a markdown report file.
"""

import os
from datetime import datetime
from typing import Any, Dict, List

import pandas as pd

COLUMNS = ['suite', 'check', 'error', 'tolerance', 'status']


def results_table(checks: List[Dict[str, Any]]) -> pd.DataFrame:
    """One row per check: suite, check name, measured error, tolerance, PASS/FAIL."""
    rows = [
        {
            'suite': c.get('suite', ''),
            'check': c['check'],
            'error': c['error'],
            'tolerance': c['tolerance'],
            'status': 'PASS' if c['passed'] else 'FAIL',
        }
        for c in checks
    ]
    return pd.DataFrame(rows, columns=COLUMNS)


def format_table(table: pd.DataFrame) -> str:
    if table.empty:
        return "(no checks)"
    return table.to_string(
        index=False,
        formatters={'error': '{:.3e}'.format, 'tolerance': '{:.0e}'.format},
    )


def summary_line(results: Dict[str, Any]) -> str:
    checks = results['checks']
    failed = sum(not c['passed'] for c in checks)
    verdict = 'passed' if results['validation_passed'] else 'failed'
    return f"Verification {verdict}: {len(checks) - failed}/{len(checks)} checks within tolerance"


def generate_verification_report(
    results: Dict[str, Any],
    reports_dir: str,
    timestamp: bool = True,
) -> str:
    """
    Write a markdown verification report.

    Args:
        results: Output of validate_suite
        reports_dir: Directory to save the report
        timestamp: Include the generation date line

    Returns:
        Path to the generated report
    """
    os.makedirs(reports_dir, exist_ok=True)
    report_path = os.path.join(reports_dir, f"verification_{results['suite']}.md")
    grid = results['grid']

    lines = [f"# Verification Report: {results['suite']}"]
    if timestamp:
        lines.append(f"**Date:** {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    lines.append(f"**Grid:** N={grid['N']}, Lx={grid['Lx']:g}, Lp={grid['Lp']:.6g}, hbar={grid['hbar']:g}")
    lines.append(f"**Status:** {'PASSED' if results['validation_passed'] else 'FAILED'}")
    lines.append("")
    lines.append("| Suite | Check | Error | Tolerance | Status |")
    lines.append("| --- | --- | --- | --- | --- |")
    for row in results_table(results['checks']).itertuples(index=False):
        mark = '✅ PASS' if row.status == 'PASS' else '❌ FAIL'
        lines.append(f"| {row.suite} | {row.check} | {row.error:.3e} | {row.tolerance:.0e} | {mark} |")
    lines.append("")

    with open(report_path, 'w') as f:
        f.write("\n".join(lines))
    return report_path
