#!/usr/bin/env python
"""
Quick start script for auxwave.

Migrates the database, loads the catalog, verifies the logistic case and runs
the A = 0 reduction of Case 1 end to end.
"""

import os
import sys

import django

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

# Setup Django
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "auxwave_storage.settings")
django.setup()

from django.core.management import call_command  # noqa: E402
from django.core.management.base import CommandError  # noqa: E402

from auxwave_data.models import CatalogCase, PipelineRun, VerificationRun  # noqa: E402


def main():
    print("auxwave - quick start")
    print("=" * 50)

    print("Running migrations...")
    call_command("migrate", verbosity=0)

    if CatalogCase.objects.count() < 20:
        print("Loading the catalog...")
        call_command("load_catalog")
    else:
        print(f"Using the stored catalog ({CatalogCase.objects.count()} cases)")

    print("\nVerifying Case 4 (logistic) on [-5, 5]:")
    call_command("verify_aux", "--case", "4", "--params", "A=1,B=-1,C1=1")

    print("\nRunning the A = 0 reduction of Case 1:")
    try:
        call_command(
            "pipeline", "--aux-case", "case1-reduced", "--params", "B=1,C1=1", "--tol", "1e-6"
        )
    except CommandError as err:
        print(f"Pipeline finished with exit code {err.returncode}: {err}")

    print("\nDatabase:")
    print("-" * 30)
    print(f"Catalog cases: {CatalogCase.objects.count()}")
    print(f"Verification runs: {VerificationRun.objects.count()}")
    print(f"Pipeline runs: {PipelineRun.objects.count()}")

    print("\nNext steps:")
    print("-" * 30)
    print("1. Regenerate the figure data:")
    print("   uv run python manage.py sample --recipe-dir docs/recipes")
    print("2. Check the printed catalog rows:")
    print("   uv run python manage.py catalog errata")
    print("3. Browse stored runs in the admin:")
    print("   uv run python manage.py createsuperuser && uv run python manage.py runserver")
    print("   http://127.0.0.1:8000/admin/")


if __name__ == "__main__":
    main()
