"""
WSGI entry point serving the health check, the admin and the read-only
harness API, e.g. `gunicorn config.wsgi` or `manage.py runserver`.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')

application = get_wsgi_application()
