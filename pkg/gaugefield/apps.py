from django.apps import AppConfig


class GaugefieldConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'gaugefield'
