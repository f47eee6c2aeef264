# Generated by Django 5.2.5 on 2026-10-17 09:12

import django.core.validators
import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="CatalogCase",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True, primary_key=True, serialize=False, verbose_name="ID"
                    ),
                ),
                (
                    "index",
                    models.PositiveSmallIntegerField(
                        help_text="Catalog case number (1-20)",
                        unique=True,
                        validators=[
                            django.core.validators.MinValueValidator(1),
                            django.core.validators.MaxValueValidator(20),
                        ],
                    ),
                ),
                ("P", models.TextField(help_text="Linear coefficient P(xi)")),
                ("Q", models.TextField(help_text="Nonlinear coefficient Q(xi)")),
                ("z", models.TextField(help_text="Solution z(xi) in the expression grammar")),
                (
                    "printed_P",
                    models.TextField(blank=True, help_text="P as printed, when it differs"),
                ),
                (
                    "printed_Q",
                    models.TextField(blank=True, help_text="Q as printed, when it differs"),
                ),
                (
                    "printed_z",
                    models.TextField(blank=True, help_text="z as printed, when it differs"),
                ),
                (
                    "form",
                    models.CharField(
                        choices=[("closed", "Closed form"), ("quadrature", "Quadrature")],
                        help_text="Whether z contains an unevaluated integral",
                        max_length=20,
                    ),
                ),
                ("notes", models.TextField(blank=True)),
                (
                    "erratum",
                    models.TextField(blank=True, help_text="Why the printed row is not used"),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("updated_at", models.DateTimeField(auto_now=True)),
            ],
            options={
                "verbose_name": "Catalog Case",
                "verbose_name_plural": "Catalog Cases",
                "ordering": ["index"],
            },
        ),
        migrations.CreateModel(
            name="VerificationRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True, primary_key=True, serialize=False, verbose_name="ID"
                    ),
                ),
                (
                    "kind",
                    models.CharField(
                        choices=[
                            ("aux", "Auxiliary equation"),
                            ("ode", "Travelling-wave ODE"),
                            ("pde", "Partial differential equation"),
                            ("classical", "Classical Bernoulli"),
                        ],
                        max_length=20,
                    ),
                ),
                ("expression", models.TextField(blank=True, help_text="Checked expression")),
                (
                    "parameters",
                    models.JSONField(default=dict, help_text="Parameter bindings as text"),
                ),
                ("interval_start", models.FloatField()),
                ("interval_end", models.FloatField()),
                ("npoints", models.PositiveIntegerField()),
                ("tolerance", models.FloatField()),
                ("max_residual", models.FloatField(blank=True, null=True)),
                ("mean_residual", models.FloatField(blank=True, null=True)),
                ("passed", models.BooleanField(default=False)),
                ("excluded_count", models.PositiveIntegerField(default=0)),
                ("complex_evaluation", models.BooleanField(default=False)),
                ("report", models.JSONField(default=dict, help_text="Full residual report")),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                (
                    "case",
                    models.ForeignKey(
                        blank=True,
                        null=True,
                        on_delete=django.db.models.deletion.SET_NULL,
                        related_name="verification_runs",
                        to="auxwave_data.catalogcase",
                    ),
                ),
            ],
            options={
                "verbose_name": "Verification Run",
                "verbose_name_plural": "Verification Runs",
                "ordering": ["-created_at"],
                "indexes": [
                    models.Index(fields=["kind", "passed"], name="auxwave_run_kind_passed_idx"),
                    models.Index(fields=["created_at"], name="auxwave_run_created_idx"),
                ],
            },
        ),
        migrations.CreateModel(
            name="PipelineRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True, primary_key=True, serialize=False, verbose_name="ID"
                    ),
                ),
                ("pde", models.TextField(help_text="The PDE in the expression grammar")),
                (
                    "b",
                    models.CharField(blank=True, help_text="b-equation parameter", max_length=50),
                ),
                ("aux_case", models.CharField(max_length=20)),
                (
                    "ode_mode",
                    models.CharField(
                        choices=[("mechanical", "Mechanical"), ("paper-eq8", "Printed reduction")],
                        max_length=20,
                    ),
                ),
                ("strategy", models.CharField(max_length=20)),
                ("balance_order", models.PositiveIntegerField(blank=True, null=True)),
                ("candidates", models.JSONField(default=list)),
                ("equation_count", models.PositiveIntegerField(default=0)),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("derived", "System derived"),
                            ("exported", "System exported"),
                            ("unsolved", "No assignment found"),
                            ("pointwise", "Pointwise report"),
                            ("solved", "Solved"),
                        ],
                        default="derived",
                        max_length=20,
                    ),
                ),
                ("passed", models.BooleanField(default=False)),
                ("output_dir", models.CharField(blank=True, max_length=500)),
                ("result", models.JSONField(default=dict, help_text="Pipeline result document")),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                (
                    "verifications",
                    models.ManyToManyField(
                        blank=True, related_name="pipeline_runs", to="auxwave_data.verificationrun"
                    ),
                ),
            ],
            options={
                "verbose_name": "Pipeline Run",
                "verbose_name_plural": "Pipeline Runs",
                "ordering": ["-created_at"],
            },
        ),
    ]
