from django.apps import AppConfig


class AuxwaveDataConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "auxwave_data"
    verbose_name = "Auxiliary-equation runs"
