"""Fixed vocabularies for the synthetic corpus. These are inventions: the
generator only needs plausible, stable strings."""

JOB_TITLES = (
    "Account Director", "Account Executive", "Accountant", "Administrative Assistant",
    "Architect", "Art Director", "Back-End Developer", "Brand Manager",
    "Business Analyst", "Business Development Manager", "Chemical Engineer", "Civil Engineer",
    "Content Writer", "Copywriter", "Customer Service Manager", "Customer Support Specialist",
    "Data Analyst", "Data Engineer", "Data Scientist", "Database Administrator",
    "Dental Hygienist", "Digital Marketing Specialist", "Electrical Engineer", "Environmental Consultant",
    "Event Planner", "Executive Assistant", "Financial Advisor", "Financial Analyst",
    "Front-End Developer", "Graphic Designer", "HR Coordinator", "HR Generalist",
    "Interior Designer", "IT Administrator", "IT Support Specialist", "Investment Banker",
    "Landscape Architect", "Legal Assistant", "Legal Counsel", "Logistics Coordinator",
    "Marketing Analyst", "Marketing Director", "Marketing Manager", "Mechanical Engineer",
    "Network Administrator", "Network Engineer", "Nurse Practitioner", "Occupational Therapist",
    "Operations Manager", "Pharmacist", "Physical Therapist", "Procurement Manager",
    "Product Designer", "Product Manager", "Project Coordinator", "Project Manager",
    "Purchasing Agent", "QA Analyst", "QA Engineer", "Research Scientist",
    "Sales Manager", "Sales Representative", "Social Media Manager", "Social Worker",
    "Software Engineer", "Software Tester", "Supply Chain Analyst", "Systems Administrator",
    "Systems Analyst", "Teacher", "UX/UI Designer", "Web Developer",
)

_BASE_SKILLS = (
    "Python", "Java", "JavaScript", "TypeScript", "SQL", "NoSQL", "Excel", "Tableau",
    "Power BI", "R", "C++", "C#", "Go", "Rust", "Scala", "Kotlin", "Swift", "PHP",
    "Ruby", "HTML", "CSS", "React", "Angular", "Vue", "Node.js", "Django", "Flask",
    "Spring", "Docker", "Kubernetes", "Terraform", "AWS", "Azure", "GCP", "Linux",
    "Git", "Jenkins", "Ansible", "Spark", "Hadoop", "Kafka", "Airflow", "Pandas",
    "TensorFlow", "PyTorch", "Machine Learning", "Deep Learning", "Statistics",
    "A/B Testing", "SEO", "SEM", "Google Analytics", "Copy Editing", "Photoshop",
    "Illustrator", "Figma", "Sketch", "InDesign", "AutoCAD", "SolidWorks", "MATLAB",
    "Revit", "SAP", "Salesforce", "HubSpot", "QuickBooks", "Negotiation",
    "Public Speaking", "Team Leadership", "Time Management", "Mentoring", "Scheduling",
    "Customer Empathy", "Conflict Resolution", "Cold Calling", "Lead Generation",
    "Bookkeeping", "Payroll", "Tax Preparation", "Auditing", "Forecasting",
    "Valuation", "Portfolio Theory", "Patient Care", "Phlebotomy", "Rehabilitation",
    "Pharmacology", "Curriculum Design", "Classroom Management", "Case Management",
    "Contract Law", "Litigation Support", "Legal Research", "Procurement", "Inventory Control",
    "Lean Six Sigma", "Kanban", "Scrum", "Jira", "Confluence", "Selenium", "Cypress",
    "Penetration Testing", "Firewalls", "TCP/IP", "Active Directory", "VMware",
    "Load Balancing", "Circuit Design", "PLC Programming", "Thermodynamics",
)

_SKILL_AREAS = (
    "Cloud", "Data", "Network", "Product", "Brand", "Supply Chain", "Risk", "Content",
    "Talent", "Financial", "Clinical", "Customer", "Security", "Quality", "Project",
    "Sales", "Vendor", "Event",
)
_SKILL_PRACTICES = (
    "Analysis", "Strategy", "Operations", "Compliance", "Planning", "Reporting",
    "Design", "Management", "Optimization", "Governance",
)

SKILLS = _BASE_SKILLS + tuple(f"{a} {p}" for a in _SKILL_AREAS for p in _SKILL_PRACTICES)

ROLES = (
    "Team Lead", "Individual Contributor", "Consultant", "Coordinator", "Specialist",
    "Associate", "Senior Associate", "Principal", "Staff Member", "Advisor",
    "Trainee", "Supervisor", "Analyst", "Strategist", "Officer", "Liaison",
    "Planner", "Administrator", "Technician", "Generalist", "Manager", "Director",
    "Head", "Partner", "Fellow", "Expert", "Operator", "Representative",
)

QUALIFICATIONS = ("B.A", "B.Com", "B.Tech", "BBA", "BCA", "M.Com", "M.Tech", "MBA", "MCA", "PhD")
WORK_TYPES = ("Contract", "Full-Time", "Intern", "Part-Time", "Temporary")
PREFERENCES = ("Both", "Female", "Male")
JOB_PORTALS = (
    "Glassdoor", "Idealist", "Indeed", "Jobs2Careers", "LinkedIn", "Monster",
    "SimplyHired", "ZipRecruiter",
)

# (lat_min, lat_max, lon_min, lon_max); coarse rectangles, not real borders
COUNTRY_BOXES = {
    "Australia": (-43.0, -11.0, 113.0, 153.0),
    "Brazil": (-33.0, 5.0, -73.0, -35.0),
    "Canada": (42.0, 60.0, -140.0, -53.0),
    "China": (20.0, 50.0, 75.0, 130.0),
    "France": (43.0, 51.0, -5.0, 8.0),
    "Germany": (47.0, 55.0, 6.0, 15.0),
    "India": (8.0, 35.0, 68.0, 97.0),
    "Japan": (31.0, 45.0, 130.0, 145.0),
    "Jordan": (29.2, 33.4, 34.9, 39.3),
    "Mexico": (15.0, 32.0, -117.0, -87.0),
    "Nigeria": (4.0, 14.0, 3.0, 14.0),
    "South Africa": (-34.0, -22.0, 17.0, 33.0),
    "United Kingdom": (50.0, 58.0, -8.0, 2.0),
    "United States": (25.0, 49.0, -125.0, -67.0),
}

_COMPANY_HEADS = (
    "Nova", "Apex", "Blue", "Crest", "Delta", "Echo", "Falcon", "Granite", "Harbor",
    "Iron", "Juniper", "Kite", "Lumen", "Maple", "North", "Orbit", "Pioneer", "Quartz",
    "River", "Summit", "Terra", "Union", "Vertex", "Willow", "Zenith", "Atlas", "Beacon",
    "Cedar", "Dune", "Ember", "Fjord", "Golden", "Helix", "Indigo", "Jade", "Keystone",
    "Lotus", "Meridian", "Nimbus", "Oak",
)
_COMPANY_STEMS = (
    "tech", "soft", "works", "logic", "labs", "point", "field", "bridge", "stone",
    "wave", "line", "gate", "path", "core", "peak", "spring", "light", "view",
    "mark", "wise", "craft", "scale", "forge", "sys", "net",
)
_COMPANY_KINDS = ("Inc.", "LLC", "Group", "Holdings", "Partners")

COMPANY_NAMES = tuple(
    f"{h}{s} {k}" for h in _COMPANY_HEADS for s in _COMPANY_STEMS for k in _COMPANY_KINDS
)

# Surface variants only: a word-level embedder should not see a template axis
# that cuts across every title.
DESCRIPTION_TEMPLATES = (
    "Seeking a {title} skilled in {s1}, {s2} and {s3}.",
    "Seeking a {title}: skilled in {s1}, {s2}, and {s3}!",
    "Seeking a {title} (skilled in {s1}, {s2} and {s3}).",
)
RESPONSIBILITY_TEMPLATES = (
    "The {title} will handle {s1}, {s2} and {s3}.",
    "The {title} will handle: {s1}, {s2}, and {s3}!",
    "The {title} will handle {s1}; {s2}; and {s3}.",
)
