import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'crosscut.settings')
django.setup()
