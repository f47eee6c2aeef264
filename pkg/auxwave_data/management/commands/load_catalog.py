"""
Load the auxiliary-equation catalog into the database.

Usage:
    python manage.py load_catalog

Running it again updates the stored rows in place.
"""

import logging

from django.db import transaction

from auxwave.catalog import CATALOG
from auxwave_data.management.base import AuxwaveCommand
from auxwave_data.models import CatalogCase

logger = logging.getLogger(__name__)

FIELDS = ["P", "Q", "z", "printed_P", "printed_Q", "printed_z", "form", "notes", "erratum"]


def case_fields(entry):
    return {
        "P": entry.P,
        "Q": entry.Q,
        "z": entry.z,
        "printed_P": entry.printed_P or "",
        "printed_Q": entry.printed_Q or "",
        "printed_z": entry.printed_z or "",
        "form": entry.solution.form,
        "notes": entry.notes,
        "erratum": entry.erratum,
    }


class Command(AuxwaveCommand):
    help = "Store the 20 catalog cases (idempotent)"

    def handle(self, *args, **options):
        with transaction.atomic():
            existing = {c.index: c for c in CatalogCase.objects.all()}
            created, updated = [], []
            for entry in CATALOG:
                fields = case_fields(entry)
                case = existing.get(entry.index)
                if case is None:
                    created.append(CatalogCase(index=entry.index, **fields))
                    continue
                for name, value in fields.items():
                    setattr(case, name, value)
                updated.append(case)
            CatalogCase.objects.bulk_create(created)
            if updated:
                CatalogCase.objects.bulk_update(updated, FIELDS)
        logger.info("catalog: %d created, %d updated", len(created), len(updated))
        self.stdout.write(
            self.style.SUCCESS(f"Catalog loaded: {len(created)} created, {len(updated)} updated")
        )
