#!/usr/bin/env python3
"""
Verify Edgelighter Setup
Run this to check if everything is configured correctly
"""

import sys
import os

print("="*80)
print("🔍 EDGELIGHTER - SETUP VERIFICATION")
print("="*80)
print()

# Check Python version
print("1. Checking Python version...")
python_version = sys.version_info
if python_version >= (3, 11):
    print(f"   ✅ Python {python_version.major}.{python_version.minor}.{python_version.micro}")
else:
    print(f"   ❌ Python {python_version.major}.{python_version.minor}.{python_version.micro} (3.11+ required for tomllib)")
print()

# Check dependencies
print("2. Checking dependencies...")
required_packages = [
    'numpy',
    'pandas',
    'scipy',
    'networkx',
    'matplotlib',
    'tqdm',
]

optional_packages = [
    ('dotenv', 'Environment variables'),
    ('pytest', 'Test suite'),
]

missing = []
for package in required_packages:
    try:
        __import__(package)
        print(f"   ✅ {package}")
    except ImportError:
        print(f"   ❌ {package} - MISSING")
        missing.append(package)

print()
print("   Optional packages:")
for package, name in optional_packages:
    try:
        __import__(package)
        print(f"   ✅ {package} ({name})")
    except ImportError:
        print(f"   ⚠️  {package} ({name}) - optional")

if missing:
    print()
    print(f"   ❌ Missing {len(missing)} required package(s)")
    print(f"   Run: pip install -r requirements.txt")
else:
    print()
    print("   ✅ All required packages installed")
print()

# Check environment variables
print("3. Checking environment configuration...")
env_ok = True
if not missing:
    sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
    from src.utils import environment_settings, load_environment, validate_environment

    env_path = load_environment()
    if env_path:
        print(f"   ✅ .env file found: {env_path}")
    else:
        print(f"   ⚠️  .env file not found (will use system environment)")

    for name, value in environment_settings().items():
        print(f"   {'✅' if value is not None else '⚠️ '} {name} = {value if value is not None else '(default)'}")

    env_ok = validate_environment()
    if not env_ok:
        print(f"   ❌ Invalid EDGELIGHTER_* values (see errors above)")
else:
    print(f"   ⚠️  Skipped until dependencies are installed")
print()

# Check data files
print("4. Checking real-network data files (optional)...")
data_files = [
    ('data/facebook_combined.txt', 'https://snap.stanford.edu/data/ego-Facebook.html'),
    ('data/email-Eu-core.txt', 'https://snap.stanford.edu/data/email-Eu-core.html'),
    ('data/email-Eu-core-department-labels.txt', 'https://snap.stanford.edu/data/email-Eu-core.html'),
]

for file, source in data_files:
    if os.path.exists(file):
        size_mb = os.path.getsize(file) / 1024 / 1024
        print(f"   ✅ {file} ({size_mb:.1f} MB)")
    else:
        print(f"   ⚠️  {file} - not found ({source})")

print()

# Check project structure
print("5. Checking project structure...")
required_dirs = ['src', 'tests', 'configs']
structure_ok = True
for dir in required_dirs:
    if os.path.isdir(dir):
        print(f"   ✅ {dir}/")
    else:
        print(f"   ❌ {dir}/ - NOT FOUND")
        structure_ok = False

print()

# Final verdict
print("="*80)
print("📊 FINAL VERDICT")
print("="*80)
print()

if not missing and env_ok and structure_ok:
    print("✅ ✅ ✅  EVERYTHING IS READY! ✅ ✅ ✅")
    print()
    print("Next steps:")
    print("1. Run the tests: pytest")
    print("2. Run a sweep: python3 edgelighter.py experiment er-sweep --config configs/er-small.toml")
else:
    print("⚠️  SETUP INCOMPLETE")
    print()
    print("Actions needed:")

    if missing:
        print(f"   → Install dependencies: pip install -r requirements.txt")

    if not env_ok:
        print(f"   → Fix EDGELIGHTER_SEED / EDGELIGHTER_THREADS in .env")

    if not structure_ok:
        print(f"   → Run this script from the project root")

print()
print("="*80)
print("For help, see: QUICKSTART.md")
print("="*80)
