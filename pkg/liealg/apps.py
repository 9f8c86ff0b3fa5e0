from django.apps import AppConfig


class LiealgConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'liealg'
